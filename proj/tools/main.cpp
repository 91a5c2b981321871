#include "cli_app.hpp"

int main(int argc, char** argv) {
    return fopid::cli::run(argc, argv);
}
