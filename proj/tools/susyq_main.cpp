#include "susyq/cli.hpp"

int main(int argc, char** argv) { return susyq::cli::run(argc, argv); }
