#include "pseudodp/cli_commands.hpp"

int main(int argc, char** argv) { return pseudodp::run_cli(argc, argv); }
