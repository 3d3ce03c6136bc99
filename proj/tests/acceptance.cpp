// Acceptance runner: one line per criterion, exit status 0 iff every selected criterion passes.
//   acceptance                 run all ten
//   acceptance --criterion 7   run one

#include <iostream>
#include <string>

#include "weylcheck/suites.hpp"

int main(int argc, char** argv) {
  using namespace weylcheck;
  int first = 1, last = kCriteria;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--criterion" && i + 1 < argc) {
      first = last = std::stoi(argv[++i]);
    } else {
      std::cerr << "usage: acceptance [--criterion N]\n";
      return 2;
    }
  }
  if (first < 1 || last > kCriteria) {
    std::cerr << "criterion must be in 1.." << kCriteria << "\n";
    return 2;
  }
  int failures = 0;
  for (int id = first; id <= last; ++id) {
    try {
      const auto r = run_criterion(id);
      std::cout << criterion_line(id, r) << std::endl;
      if (r.verdict != Verdict::pass) ++failures;
    } catch (const std::exception& e) {
      std::cout << "criterion " << id << " FAIL  " << criterion_title(id) << ": error: " << e.what() << std::endl;
      ++failures;
    }
  }
  return failures == 0 ? 0 : 1;
}
