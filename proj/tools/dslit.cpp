#include "dslit/cli/commands.hpp"

int main(int argc, char** argv) { return dslit::cli::main_entry(argc, argv); }
