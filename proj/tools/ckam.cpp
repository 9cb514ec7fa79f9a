#include <string>
#include <vector>

#include "ckam/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return ckam::run_cli(args);
}
