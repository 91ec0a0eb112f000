#include "pnstruct/cli.hpp"

int main(int argc, char** argv) { return pnstruct::run_main(argc, argv); }
