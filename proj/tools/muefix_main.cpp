// SPDX-License-Identifier: Apache-2.0
#include "muefix/cli.hpp"

int main(int argc, char** argv) { return muefix::cli::run(argc, argv); }
