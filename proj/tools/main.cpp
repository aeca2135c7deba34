#include <iostream>

int main(int argc, char** argv) {
    (void)argc;
    (void)argv;
    std::cerr << "modp-selmer: not yet wired\n";
    return 1;
}
