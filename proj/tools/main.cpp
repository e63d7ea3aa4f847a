#include <iostream>

#include "oraclebench/cli.hpp"

int main(int argc, char** argv) {
  return oraclebench::run_cli(argc, argv, std::cout, std::cerr);
}
