#include <exception>
#include <iostream>

#include "topovote/cli.hpp"

int main(int argc, char** argv) {
  try {
    return topovote::cli::run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return topovote::cli::kExitError;
  }
}
