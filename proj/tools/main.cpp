#include "gl3m/cli.hpp"

int main(int argc, char** argv) { return gl3m::run(argc, argv); }
