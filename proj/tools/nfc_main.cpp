#include "nfc/cli.hpp"

int main(int argc, char** argv) {
  return nfc::cli::run_cli(argc, argv, std::cout, std::cerr);
}
