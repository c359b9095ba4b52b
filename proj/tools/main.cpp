#include <string>
#include <vector>

#include "afn/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return afn::cli::run(args);
}
