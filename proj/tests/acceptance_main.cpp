// Runs every acceptance criterion and prints one PASS/FAIL line each.
#include <iostream>

#include "bstrank/acceptance.hpp"
#include "bstrank/errors.hpp"

int main() {
  try {
    const auto report = bstrank::acceptance::run({});
    std::cout << bstrank::acceptance::summary(report);
    const auto failed = bstrank::acceptance::failures(report);
    if (!failed.empty()) std::cout << "failed checks:\n" << failed;
    return report.pass() ? 0 : 1;
  } catch (const bstrank::InternalInconsistency& e) {
    std::cout << "internal inconsistency: " << e.what() << "\n";
    return 3;
  }
}
