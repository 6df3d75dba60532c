#include <string>
#include <vector>

#include "qoc/cli.hpp"

int main(int argc, char** argv) {
  return qoc::cli::run(std::vector<std::string>(argv + 1, argv + argc));
}
