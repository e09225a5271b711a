// Acceptance suite: runs every criterion at its pinned tolerance and prints
// one PASS/FAIL line each. Exit status is nonzero if any criterion fails.

#include "affine/validation.hpp"

#include <cstring>
#include <iostream>
#include <string>

int main(int argc, char** argv) {
  affine::validation::Options opt;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--table") == 0 && i + 1 < argc) {
      opt.structure_table_path = argv[++i];
    } else if (std::strcmp(argv[i], "--seed") == 0 && i + 1 < argc) {
      opt.seed = std::stoull(argv[++i]);
    } else {
      std::cerr << "usage: acceptance [--seed N] [--table PATH]\n";
      return 2;
    }
  }

  int failures = 0;
  for (const auto& r : affine::validation::acceptance_suite(opt)) {
    std::cout << affine::validation::format_result(r) << std::endl;
    if (!r.passed) ++failures;
  }
  if (!opt.structure_table_path.empty())
    std::cout << "structure constant table (n = 4) written to " << opt.structure_table_path << '\n';
  std::cout << (failures == 0 ? "all acceptance criteria passed" : std::to_string(failures) + " criteria FAILED")
            << '\n';
  return failures == 0 ? 0 : 1;
}
