// Writes the synthetic benchmark vocabulary as vocabulary JSON.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "gcd/synth_vocab.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Generate a synthetic subword vocabulary"};
  std::size_t size = 5000;
  std::uint64_t seed = 0;
  std::string out;
  app.add_option("--size", size, "Entries including EOS")->check(CLI::Range(2, 1 << 20));
  app.add_option("--seed", seed);
  app.add_option("--out", out, "Output file (default stdout)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  std::string json = gcd::save_vocabulary(gcd::synthetic_vocabulary(size, seed));
  if (out.empty()) {
    std::cout << json << "\n";
    return 0;
  }
  std::ofstream f(out, std::ios::binary);
  if (!(f << json << "\n")) {
    std::cerr << "error: cannot write " << out << "\n";
    return 1;
  }
  return 0;
}
