// SPDX-License-Identifier: Apache-2.0
#include "beamopt/cli.hpp"

int main(int argc, char** argv) { return beamopt::cli::run(argc, argv); }
