#include "ontocrawl/cli.hpp"

int main(int argc, char** argv) { return ontocrawl::run_cli(argc, argv); }
