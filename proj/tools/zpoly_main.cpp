#include <exception>
#include <iostream>

#include "zpoly/cli.hpp"

int main(int argc, char** argv) {
  try {
    return zpoly::run_command(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "zpoly: internal error: " << e.what() << "\n";
    return 70;
  }
}
