#include "rabi_floquet/cli.hpp"

int main(int argc, char** argv) { return rabi_floquet::run_cli(argc, argv); }
