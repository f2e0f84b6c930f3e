#include <string>
#include <vector>

#include "btom/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return btom::cli::run(std::move(args));
}
