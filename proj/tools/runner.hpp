#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fracheat/csv.hpp"
#include "fracheat/sampled.hpp"

namespace fracheat::cli {

struct Params {
    std::filesystem::path out = "out";
    std::uint64_t seed = 7;
    std::size_t grid_m = 512;
    double box_l = 8.0;

    int n = 1;
    double theta = 2.0;
    double q = 1.0;
    std::optional<double> alpha;  // defaults to n/theta
    double beta = 0.0;
    double gamma = 0.0;
    double r = 1.0;
    std::optional<double> rho;
    double T = 1.0;
    double S = 1.0;
    int variant = 1;

    std::string check = "lemma31";
    std::string family = "frak";
    std::string profile = "indicator";
    double radius = 1.0;
    std::string prop = "A2";
    int n_max = 256;

    std::optional<double> lo;  // s or t grid bounds
    std::optional<double> hi;
    std::size_t points = 40;
    std::vector<double> times{0.1, 1.0};
    double x_max = 20.0;

    double eps = 0.1;
    std::vector<double> eps_grid{0.01, 0.03, 0.1, 0.3, 1.0, 3.0};
    double target_ratio = 1.1;
    std::size_t steps = 256;
    std::size_t max_sweeps = 15;
    double tolerance = 1e-10;

    double alpha_or_default() const { return alpha ? *alpha : n / theta; }
    GridSpec grid() const { return make_grid(n, box_l, grid_m); }
};

struct SummaryRow {
    std::string subcommand;
    std::string check;
    std::string params;
    double max_ratio = 0.0;
    bool pass = false;
    double wall_ms = 0.0;
};

/// Collects artifacts in memory; everything is written at the end of the run.
class Run {
public:
    explicit Run(Params params) : params_(std::move(params)) {}
    const Params& params() const { return params_; }

    void add_artifact(const std::string& file, csv::Table table);
    void add_summary(SummaryRow row) { summary_.push_back(std::move(row)); }
    const std::vector<SummaryRow>& summary() const { return summary_; }
    bool all_pass() const;

    // Writes every artifact plus summary.csv into params.out.
    void emit() const;

private:
    Params params_;
    std::vector<std::pair<std::string, csv::Table>> artifacts_;
    std::vector<SummaryRow> summary_;
};

SampledFunction make_profile(const Params& p);

void run_norm(Run& run);
void run_kernel(Run& run);
void run_verify(Run& run);
void run_solve(Run& run);
void run_scan(Run& run);
void run_appendix(Run& run);

}  // namespace fracheat::cli
