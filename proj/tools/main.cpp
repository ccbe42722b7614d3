#include "stacky/cli.hpp"

int main(int argc, char** argv) { return stacky::dispatch(argc, argv); }
