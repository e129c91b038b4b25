#include "mgtf/runner.hpp"

int main(int argc, char** argv) { return mgtf::run_command(argc, argv); }
