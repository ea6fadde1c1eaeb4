#include <cstdio>

int main(int argc, char** argv) {
  (void)argc;
  (void)argv;
  std::printf("trajevo: command-line front end (subcommands land with the full build)\n");
  return 0;
}
