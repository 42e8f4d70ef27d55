#include "commands.hpp"

int main(int argc, char** argv) { return dispvo::cli::run(argc, argv); }
