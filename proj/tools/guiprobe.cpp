// SPDX-License-Identifier: Apache-2.0
#include "guiprobe/cli.hpp"

int main(int argc, char** argv) { return guiprobe::run_cli(argc, argv); }
