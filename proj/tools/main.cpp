#include <string>
#include <vector>

#include "poissoncap/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return poissoncap::cli::run(args);
}
