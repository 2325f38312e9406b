#include "cli_config.hpp"

int main(int argc, char** argv) { return imfd::run_cli(argc, argv); }
