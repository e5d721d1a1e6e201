// SPDX-License-Identifier: Apache-2.0
//
// irsmimo <experiment> [--config file.json] [--seed n] [--out dir] [--label name] [--threads n] ...
// Exit codes: 0 success, 2 configuration error, 3 numerical failure, 1 anything else.

#include "cli.hpp"

int main(int argc, char **argv)
{
    return irsmimo::tools::run_cli(argc, argv);
}
