#include <string>
#include <vector>

#include "cli.h"

int main(int argc, char** argv) {
  return emoint::cli::Run(std::vector<std::string>(argv, argv + argc));
}
