// Acceptance suite: runs every criterion at its pinned tolerance and prints
// one pass/fail line per criterion. Exit status is nonzero if any fail.

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

#include "lue/parallel.hpp"
#include "lue/verify.hpp"

int main(int argc, char** argv) {
  unsigned threads = lue::default_threads();
  for (int i = 1; i + 1 < argc; ++i)
    if (std::strcmp(argv[i], "--threads") == 0)
      threads = static_cast<unsigned>(std::atoi(argv[i + 1]));

  int failed = 0;
  const auto results = lue::run_acceptance(threads, [&](const lue::CheckResult& r) {
    std::printf("%s %-18s measured=%-12.5g threshold=%-10.5g %6.2fs  %s\n",
                r.pass ? "[PASS]" : "[FAIL]", r.id.c_str(), r.measured, r.threshold, r.seconds,
                r.detail.c_str());
    std::fflush(stdout);
  });
  for (const auto& r : results) failed += r.pass ? 0 : 1;
  std::printf("%d/%zu criteria passed\n", static_cast<int>(results.size()) - failed,
              results.size());
  return failed == 0 ? 0 : 1;
}
