#include "cli_app.hpp"

int main(int argc, char** argv) { return spheremean::cli::run(argc, argv); }
