#include <string>
#include <vector>

#include "ccs/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return ccs::run_command(args);
}
