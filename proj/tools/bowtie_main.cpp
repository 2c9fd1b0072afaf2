#include "bowtie/cli.hpp"

int main(int argc, char** argv) { return bowtie::run_cli(argc, argv); }
