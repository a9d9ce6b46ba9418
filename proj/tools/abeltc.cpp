#include "abeltc/cli.hpp"

int main(int argc, char** argv) { return abeltc::cli::run(argc, argv); }
