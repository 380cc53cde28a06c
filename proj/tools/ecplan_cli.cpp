#include <cstdio>

int main() {
    std::puts("ecplan: command-line interface under construction");
    return 1;
}
