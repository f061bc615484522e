#include "critwave/harness.hpp"

int main(int argc, char** argv) { return critwave::harness::run_cli(argc, argv); }
