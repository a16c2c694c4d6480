#include <string>
#include <vector>

#include "umbilic/cli.hpp"

int main(int argc, char** argv) {
    return umbilic::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
