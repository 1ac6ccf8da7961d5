#include "mcsim/cli_io.hpp"

int main(int argc, char** argv) { return mcsim::cli_main(argc, argv); }
