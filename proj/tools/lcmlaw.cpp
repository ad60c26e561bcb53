#include "lcmlaw/cli.hpp"

int main(int argc, char** argv) { return lcmlaw::cli::main_entry(argc, argv); }
