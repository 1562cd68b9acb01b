#include "kblink/cli.hpp"

int main(int argc, char** argv) { return kblink::cli::run(argc, argv); }
