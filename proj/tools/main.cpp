#include "sipkit/cli.hpp"

int main(int argc, char** argv) { return sipkit::cli::run_cli(argc, argv); }
