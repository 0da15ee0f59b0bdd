#include "epd/cli.hpp"

int main(int argc, char** argv) {
    return epd::cli::main(argc, argv);
}
