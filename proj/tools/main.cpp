#include "cli.hpp"

int main(int argc, char** argv) {
  return kfib::cli::run(std::vector<std::string>(argv + 1, argv + argc));
}
