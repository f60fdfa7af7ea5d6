#include <iostream>
#include <string>
#include <vector>

#include "slogcert_tools/cli.hpp"

int main(int argc, char** argv) {
  return slogcert::tools::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
