#include "pds/cli.hpp"

int main(int argc, char** argv) { return pds::cli::dispatch(argc, argv); }
