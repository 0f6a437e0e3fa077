// compare_csv GOLDEN ACTUAL [rel_tol] [abs_tol]
// Same columns and row count; every value within abs_tol + rel_tol * |golden|.
// Metadata lines are not compared.

#include <cmath>
#include <cstdio>
#include <exception>
#include <string>

#include "abring/io/csv.hpp"

int main(int argc, char** argv) {
    if (argc < 3) {
        std::fprintf(stderr, "usage: compare_csv GOLDEN ACTUAL [rel_tol] [abs_tol]\n");
        return 2;
    }
    const double rel = argc > 3 ? std::stod(argv[3]) : 1e-9;
    const double abs_tol = argc > 4 ? std::stod(argv[4]) : 1e-15;
    try {
        const auto golden = abring::io::read_csv(argv[1]);
        const auto actual = abring::io::read_csv(argv[2]);
        if (golden.columns != actual.columns) {
            std::fprintf(stderr, "column mismatch\n");
            return 1;
        }
        if (golden.rows.size() != actual.rows.size()) {
            std::fprintf(stderr, "row count %zu vs %zu\n", golden.rows.size(), actual.rows.size());
            return 1;
        }
        int bad = 0;
        for (std::size_t r = 0; r < golden.rows.size(); ++r) {
            for (std::size_t c = 0; c < golden.columns.size(); ++c) {
                const double g = golden.rows[r][c];
                const double a = actual.rows[r][c];
                if (std::abs(a - g) > abs_tol + rel * std::abs(g)) {
                    if (bad++ < 10) {
                        std::fprintf(stderr, "row %zu %s: golden %.12g actual %.12g\n", r,
                                     golden.columns[c].c_str(), g, a);
                    }
                }
            }
        }
        if (bad) {
            std::fprintf(stderr, "%d values differ\n", bad);
            return 1;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 2;
    }
    return 0;
}
