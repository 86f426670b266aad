/*
 * SPDX-License-Identifier: Apache-2.0
 */
#include <iostream>

#include "sisa/cli.hpp"

int main(int argc, char** argv) {
  return sisa::run_cli({argv + 1, argv + argc}, std::cout, std::cerr);
}
