#include <iostream>

#include "fqt/cli.h"

int main(int argc, char **argv) {
    return fqt::run_cli(argc, argv, std::cout, std::cerr);
}
