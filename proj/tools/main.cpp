#include "pileup/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
  std::vector<std::string> args(argv + 1, argv + argc);
  return pileup::cli::run(args, std::cout, std::cerr);
}
