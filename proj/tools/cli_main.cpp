#include "adasample/experiments.hpp"

int main(int argc, char** argv) { return adasample::run_main(argc, argv); }
