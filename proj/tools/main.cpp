#include "commoneq/cli.hpp"

int main(int argc, char** argv) { return commoneq::cli::run_main(argc, argv); }
