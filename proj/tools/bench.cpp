// Timing harness: serial reference loops vs the OpenMP batch paths, on the
// same inputs, with results cross-checked for equality.

#include <chrono>
#include <iostream>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <CLI11.hpp>

#include "mqunits/survey.hpp"

using namespace mqunits;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<BigInt> fundamental_discs(long bound) {
    std::vector<BigInt> discs;
    for (long n = 3; n <= bound; ++n) {
        for (const BigInt d : {BigInt(-n), BigInt(n)}) {
            BigInt D = (mod_long(d, 4) == 1) ? d : 4 * d;
            if (abs(D) <= bound && is_fundamental_discriminant(D))
                discs.push_back(D);
        }
    }
    return discs;
}

void bench_class_numbers(long bound, int jobs) {
    auto discs = fundamental_discs(bound);
    std::vector<BigInt> serial(discs.size()), parallel(discs.size());

    auto t0 = Clock::now();
    for (std::size_t i = 0; i < discs.size(); ++i)
        serial[i] = class_number(discs[i]);
    double t_serial = seconds_since(t0);

    t0 = Clock::now();
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
#endif
    for (long i = 0; i < static_cast<long>(discs.size()); ++i)
        parallel[i] = class_number(discs[i]);
    double t_parallel = seconds_since(t0);

    if (serial != parallel) {
        std::cerr << "class-number results diverge between paths\n";
        std::exit(1);
    }
    std::cout << "class numbers, " << discs.size() << " fundamental |D| <= "
              << bound << ":\n"
              << "  serial   " << t_serial << " s\n"
              << "  omp(" << jobs << ")   " << t_parallel << " s  (speedup "
              << (t_parallel > 0 ? t_serial / t_parallel : 0.0) << "x)\n";
}

void bench_lemma(const std::string& lemma, long samples, int jobs) {
    auto t0 = Clock::now();
    LemmaSummary serial = verify_lemma(lemma, samples, 0, 1);
    double t_serial = seconds_since(t0);

    t0 = Clock::now();
    LemmaSummary parallel = verify_lemma(lemma, samples, 0, jobs);
    double t_parallel = seconds_since(t0);

    if (serial.passed != parallel.passed || serial.tested != parallel.tested) {
        std::cerr << "lemma campaign results diverge between paths\n";
        std::exit(1);
    }
    std::cout << "rule " << lemma << " over " << serial.tested << " pairs ("
              << serial.passed << " pass):\n"
              << "  serial   " << t_serial << " s\n"
              << "  omp(" << jobs << ")   " << t_parallel << " s  (speedup "
              << (t_parallel > 0 ? t_serial / t_parallel : 0.0) << "x)\n";
}

void bench_triples(long count, int jobs) {
    TripleList list = find_triples(2, 1000, count);
    std::vector<BigInt> ells = {1};  // admissible for every conforming triple

    auto t0 = Clock::now();
    auto serial = verify_triples(list.triples, ells, 1);
    double t_serial = seconds_since(t0);

    t0 = Clock::now();
    auto parallel = verify_triples(list.triples, ells, jobs);
    double t_parallel = seconds_since(t0);

    for (std::size_t i = 0; i < serial.size(); ++i)
        if (serial[i].all_pass != parallel[i].all_pass ||
            serial[i].index_log2 != parallel[i].index_log2) {
            std::cerr << "triple batch results diverge between paths\n";
            std::exit(1);
        }
    std::cout << "triple pipeline over " << serial.size() << " triples:\n"
              << "  serial   " << t_serial << " s\n"
              << "  omp(" << jobs << ")   " << t_parallel << " s  (speedup "
              << (t_parallel > 0 ? t_serial / t_parallel : 0.0) << "x)\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mqunits benchmark: serial reference vs OpenMP batch paths"};
    long disc_bound = 10000;
    long lemma_samples = 40;
    long triple_count = 3;
    int jobs = 0;
    app.add_option("--max-disc", disc_bound, "Class-number sweep bound");
    app.add_option("--lemma-samples", lemma_samples, "Pairs per rule campaign");
    app.add_option("--triples", triple_count, "Case-2 triples to verify");
    app.add_option("--jobs", jobs, "Worker count (default: hardware)");
    CLI11_PARSE(app, argc, argv);

    if (jobs <= 0) {
#ifdef _OPENMP
        jobs = omp_get_max_threads();
#else
        jobs = 1;
#endif
    }

    bench_class_numbers(disc_bound, jobs);
    bench_lemma("4.1", lemma_samples, jobs);
    bench_triples(triple_count, jobs);
    return 0;
}
