#include "levelcurve/cli.hpp"

int main(int argc, char** argv) { return levelcurve::cli::run(argc, argv); }
