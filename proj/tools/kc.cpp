#include "kc/cli.hpp"

int main(int argc, char** argv) { return kc::cli::main(argc, argv); }
