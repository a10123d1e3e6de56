#include <cstdio>

int main() {
  std::puts("spherediff CLI placeholder");
  return 0;
}
