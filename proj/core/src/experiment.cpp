#include "remest/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "remest/errors.hpp"

namespace remest {

namespace {

using nlohmann::json;

std::string join_path(const std::string& prefix, const std::string& key) {
    return prefix.empty() ? key : prefix + "." + key;
}

[[noreturn]] void fail(const std::string& what, const std::string& field) {
    throw ConfigError(what, field);
}

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& prefix) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* key : allowed) {
            if (it.key() == key) {
                known = true;
                break;
            }
        }
        if (!known) fail("unknown key", join_path(prefix, it.key()));
    }
}

const json& get_required(const json& obj, const char* key,
                         const std::string& prefix) {
    const auto it = obj.find(key);
    if (it == obj.end()) fail("missing required key", join_path(prefix, key));
    return *it;
}

Eigen::MatrixXd parse_matrix(const json& value, const std::string& path) {
    if (!value.is_array() || value.empty())
        fail("expected a nonempty array of rows (row-major nested arrays)", path);
    const std::size_t rows = value.size();
    std::size_t cols = 0;
    for (std::size_t i = 0; i < rows; ++i) {
        const json& row = value[i];
        const std::string row_path = path + "[" + std::to_string(i) + "]";
        if (!row.is_array() || row.empty())
            fail("expected a nonempty array of numbers", row_path);
        if (i == 0)
            cols = row.size();
        else if (row.size() != cols)
            fail("rows have inconsistent lengths", path);
        for (std::size_t j = 0; j < cols; ++j)
            if (!row[j].is_number())
                fail("expected a number",
                     row_path + "[" + std::to_string(j) + "]");
    }
    Eigen::MatrixXd m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            m(static_cast<long>(i), static_cast<long>(j)) =
                value[i][j].get<double>();
    return m;
}

double parse_number(const json& value, const std::string& path) {
    if (!value.is_number()) fail("expected a number", path);
    return value.get<double>();
}

long parse_positive_integer(const json& value, const std::string& path) {
    if (!value.is_number_integer()) fail("expected an integer", path);
    const auto v = value.get<long long>();
    if (v < 1) fail("expected a positive integer", path);
    return static_cast<long>(v);
}

std::uint64_t parse_seed(const json& value, const std::string& path) {
    if (value.is_number_unsigned()) return value.get<std::uint64_t>();
    if (value.is_number_integer() && value.get<std::int64_t>() >= 0)
        return static_cast<std::uint64_t>(value.get<std::int64_t>());
    fail("expected a nonnegative integer", path);
}

PolicySpec parse_policy(const json& value, const std::string& path) {
    if (!value.is_object()) fail("expected an object", path);
    check_keys(value, {"kind", "epsilon", "theta_c_hat", "fixed_channel"}, path);

    const json& kind_value = get_required(value, "kind", path);
    if (!kind_value.is_string()) fail("expected a string", path + ".kind");
    const auto kind = policy_kind_from_name(kind_value.get<std::string>());
    if (!kind)
        fail("unknown policy kind '" + kind_value.get<std::string>() +
                 "' (expected epsilon-greedy, ts, obs, sbs, oracle or fixed)",
             path + ".kind");

    PolicySpec spec;
    spec.kind = *kind;
    if (const auto it = value.find("epsilon"); it != value.end())
        spec.epsilon = parse_number(*it, path + ".epsilon");
    if (const auto it = value.find("theta_c_hat"); it != value.end())
        spec.theta_c_hat = parse_number(*it, path + ".theta_c_hat");
    if (const auto it = value.find("fixed_channel"); it != value.end())
        spec.fixed_channel = static_cast<int>(
            parse_positive_integer(*it, path + ".fixed_channel"));
    return spec;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (long i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (long j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

json policy_to_json(const PolicySpec& spec) {
    json p;
    p["kind"] = policy_kind_name(spec.kind);
    if (spec.epsilon) p["epsilon"] = *spec.epsilon;
    if (spec.theta_c_hat) p["theta_c_hat"] = *spec.theta_c_hat;
    if (spec.fixed_channel) p["fixed_channel"] = *spec.fixed_channel;
    return p;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
    if (!root.is_object()) fail("top-level config must be a JSON object", "");
    check_keys(root,
               {"model", "thetas", "policies", "horizon", "runs", "seed",
                "trace_cap", "output_path"},
               "");

    ExperimentConfig config;

    const json& model = get_required(root, "model", "");
    if (!model.is_object()) fail("expected an object", "model");
    check_keys(model, {"A", "C", "Q", "R"}, "model");
    config.model.A = parse_matrix(get_required(model, "A", "model"), "model.A");
    config.model.C = parse_matrix(get_required(model, "C", "model"), "model.C");
    config.model.Q = parse_matrix(get_required(model, "Q", "model"), "model.Q");
    config.model.R = parse_matrix(get_required(model, "R", "model"), "model.R");

    const json& thetas = get_required(root, "thetas", "");
    if (!thetas.is_array() || thetas.empty())
        fail("expected a nonempty array of numbers", "thetas");
    for (std::size_t i = 0; i < thetas.size(); ++i)
        config.thetas.push_back(parse_number(
            thetas[i], "thetas[" + std::to_string(i) + "]"));

    const json& policies = get_required(root, "policies", "");
    if (!policies.is_array()) fail("expected an array", "policies");
    for (std::size_t i = 0; i < policies.size(); ++i)
        config.policies.push_back(parse_policy(
            policies[i], "policies[" + std::to_string(i) + "]"));

    config.horizon = static_cast<int>(
        parse_positive_integer(get_required(root, "horizon", ""), "horizon"));
    config.runs = parse_positive_integer(get_required(root, "runs", ""), "runs");
    config.seed = parse_seed(get_required(root, "seed", ""), "seed");
    if (const auto it = root.find("trace_cap"); it != root.end()) {
        config.trace_cap = parse_number(*it, "trace_cap");
    }
    const json& output_path = get_required(root, "output_path", "");
    if (!output_path.is_string()) fail("expected a string", "output_path");
    config.output_path = output_path.get<std::string>();

    validate_config(config);
    return config;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw IoError("cannot open config file: " + path);
    std::ostringstream text;
    text << file.rdbuf();
    if (file.bad()) throw IoError("cannot read config file: " + path);
    return parse_config(text.str());
}

std::string serialize_config(const ExperimentConfig& config) {
    json root;
    root["model"]["A"] = matrix_to_json(config.model.A);
    root["model"]["C"] = matrix_to_json(config.model.C);
    root["model"]["Q"] = matrix_to_json(config.model.Q);
    root["model"]["R"] = matrix_to_json(config.model.R);
    root["thetas"] = config.thetas;
    root["policies"] = json::array();
    for (const PolicySpec& spec : config.policies)
        root["policies"].push_back(policy_to_json(spec));
    root["horizon"] = config.horizon;
    root["runs"] = config.runs;
    root["seed"] = config.seed;
    root["trace_cap"] = config.trace_cap;
    root["output_path"] = config.output_path;
    return root.dump(2) + "\n";
}

void validate_config(const ExperimentConfig& config) {
    try {
        validate_model(config.model);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what(), "model");
    }
    std::optional<ChannelBank> bank;
    try {
        bank.emplace(config.thetas);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what(), "thetas");
    }
    if (config.horizon < 1) fail("must be at least 1", "horizon");
    if (config.runs < 1) fail("must be at least 1", "runs");
    if (!(config.trace_cap > 0.0)) fail("must be positive", "trace_cap");
    if (config.output_path.empty()) fail("must not be empty", "output_path");

    const double theta_c = critical_probability(config.model.A);
    for (std::size_t i = 0; i < config.policies.size(); ++i) {
        try {
            Policy::make(config.policies[i], theta_c, bank->best_channel(),
                         bank->size());
        } catch (const ConfigError& e) {
            const std::string prefix = "policies[" + std::to_string(i) + "]";
            throw ConfigError(e.message(), e.field().empty()
                                               ? prefix
                                               : prefix + "." + e.field());
        }
    }
}

RunRecord run_single(const SystemModel& model, const SteadyState& steady,
                     const ChannelBank& bank, const Policy& policy, int T,
                     double cap, RandomStream& stream) {
    const long n = model.A.rows();
    PosteriorState posterior(bank.size());
    Eigen::MatrixXd P = steady.Pbar;
    Eigen::MatrixXd AP(n, n), next(n, n);

    RunRecord record;
    record.selections.reserve(static_cast<std::size_t>(T));
    record.gammas.reserve(static_cast<std::size_t>(T));
    record.traces.reserve(static_cast<std::size_t>(T));

    for (int k = 1; k <= T; ++k) {
        const int m = policy.select(posterior, stream);
        const int gamma = bank.draw(m, stream);
        posterior = update(std::move(posterior), m, gamma);

        if (gamma == 1) {
            P = steady.Pbar;
        } else {
            AP.noalias() = model.A * P;
            next.noalias() = AP * model.A.transpose();
            next += model.Q;
            P = 0.5 * (next + next.transpose());
        }
        double trace = P.trace();
        if (trace > cap) {
            record.diverged = true;
            P *= cap / trace;  // keep finite; reception still resets to Pbar
            trace = cap;
        }

        record.selections.push_back(m);
        record.gammas.push_back(static_cast<std::uint8_t>(gamma));
        record.traces.push_back(trace);
    }
    return record;
}

namespace {

// Runs are processed in fixed chunks of ascending run indices and the chunk
// partials are merged in ascending order, for every worker count including
// one. This keeps the floating-point summation order, and therefore the CSV
// bytes, independent of parallelism.
constexpr long kChunkRuns = 64;

struct PolicyAggregation {
    std::mutex mu;
    std::map<long, RegretAccumulator> pending;
    long next_chunk = 0;
    std::optional<RegretAccumulator> total;
};

RegretAccumulator run_chunk(const ExperimentConfig& config,
                            const SteadyState& steady, const ChannelBank& bank,
                            const Policy& policy, int policy_ordinal,
                            const std::vector<double>& oracle, long chunk) {
    const RunPlan plan{config.seed};
    RegretAccumulator partial(oracle, bank);
    const long begin = chunk * kChunkRuns;
    const long end = std::min(config.runs, begin + kChunkRuns);
    for (long r = begin; r < end; ++r) {
        RandomStream stream(plan.stream_seed(policy_ordinal, r));
        partial.add(run_single(config.model, steady, bank, policy,
                               config.horizon, config.trace_cap, stream));
    }
    return partial;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config, int workers) {
    validate_config(config);
    const SteadyState steady = make_steady_state(config.model);
    const ChannelBank bank(config.thetas);

    std::vector<Policy> policies;
    policies.reserve(config.policies.size());
    for (std::size_t i = 0; i < config.policies.size(); ++i) {
        try {
            policies.push_back(Policy::make(config.policies[i], steady.theta_c,
                                            bank.best_channel(), bank.size()));
        } catch (const ConfigError& e) {
            const std::string prefix = "policies[" + std::to_string(i) + "]";
            throw ConfigError(e.message(), e.field().empty()
                                               ? prefix
                                               : prefix + "." + e.field());
        }
    }

    ExperimentResult result;
    result.steady = steady;
    result.oracle_trace =
        oracle_trace_series(config.model, steady, bank.theta_star(),
                            config.horizon);

    const long chunks = (config.runs + kChunkRuns - 1) / kChunkRuns;
    const int n_policies = static_cast<int>(policies.size());

    if (workers <= 0) {
        const unsigned hw = std::thread::hardware_concurrency();
        workers = hw == 0 ? 1 : static_cast<int>(hw);
    }

    std::vector<RegretAccumulator> totals;
    totals.reserve(static_cast<std::size_t>(n_policies));

    if (workers == 1 || n_policies == 0) {
        for (int p = 0; p < n_policies; ++p) {
            RegretAccumulator total(result.oracle_trace, bank);
            for (long c = 0; c < chunks; ++c)
                total.merge(run_chunk(config, steady, bank, policies[
                    static_cast<std::size_t>(p)], p, result.oracle_trace, c));
            totals.push_back(std::move(total));
        }
    } else {
        std::vector<PolicyAggregation> agg(static_cast<std::size_t>(n_policies));
        for (auto& a : agg) a.total.emplace(result.oracle_trace, bank);

        std::atomic<long> next_task{0};
        const long total_tasks = chunks * n_policies;
        std::mutex error_mu;
        std::exception_ptr first_error;

        const auto worker_loop = [&]() {
            for (;;) {
                {
                    std::lock_guard<std::mutex> lock(error_mu);
                    if (first_error) return;
                }
                const long task = next_task.fetch_add(1);
                if (task >= total_tasks) return;
                const int p = static_cast<int>(task / chunks);
                const long c = task % chunks;
                try {
                    RegretAccumulator partial = run_chunk(
                        config, steady, bank,
                        policies[static_cast<std::size_t>(p)], p,
                        result.oracle_trace, c);
                    PolicyAggregation& a = agg[static_cast<std::size_t>(p)];
                    std::lock_guard<std::mutex> lock(a.mu);
                    a.pending.emplace(c, std::move(partial));
                    for (auto it = a.pending.find(a.next_chunk);
                         it != a.pending.end();
                         it = a.pending.find(a.next_chunk)) {
                        a.total->merge(it->second);
                        a.pending.erase(it);
                        ++a.next_chunk;
                    }
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mu);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        };

        const long thread_count =
            std::min<long>(workers, std::max<long>(1, total_tasks));
        std::vector<std::thread> threads;
        threads.reserve(static_cast<std::size_t>(thread_count));
        for (long t = 0; t < thread_count; ++t) threads.emplace_back(worker_loop);
        for (std::thread& t : threads) t.join();
        if (first_error) std::rethrow_exception(first_error);

        for (auto& a : agg) totals.push_back(std::move(*a.total));
    }

    result.policies.reserve(static_cast<std::size_t>(n_policies));
    for (int p = 0; p < n_policies; ++p) {
        PolicyResult pr;
        pr.spec = config.policies[static_cast<std::size_t>(p)];
        pr.label = policy_kind_name(pr.spec.kind);
        pr.report = totals[static_cast<std::size_t>(p)].finalize();
        pr.scaling = scaling_fit(pr.report.cum_regret, config.horizon / 10);
        result.policies.push_back(std::move(pr));
    }
    return result;
}

std::string format_csv_double(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.10g", value);
    return buffer;
}

std::string policy_csv(const PolicyResult& policy) {
    std::string out =
        "k,mean_trace,oracle_trace,cum_regret,stderr_regret,n_sub_mean,"
        "classical_regret_mean\n";
    const RegretReport& r = policy.report;
    for (std::size_t k = 0; k < r.mean_trace.size(); ++k) {
        out += std::to_string(k + 1);
        out += ',';
        out += format_csv_double(r.mean_trace[k]);
        out += ',';
        out += format_csv_double(r.oracle_trace[k]);
        out += ',';
        out += format_csv_double(r.cum_regret[k]);
        out += ',';
        out += format_csv_double(r.stderr_regret[k]);
        out += ',';
        out += format_csv_double(r.n_sub_mean[k]);
        out += ',';
        out += format_csv_double(r.classical_regret_mean[k]);
        out += '\n';
    }
    return out;
}

std::string summary_csv(const ExperimentConfig& config,
                        const ExperimentResult& result) {
    std::string out =
        "policy,epsilon,theta_c_hat,T,runs,regret_T,stderr_T,n_sub_T,"
        "diverged_runs,scaling_class\n";
    for (const PolicyResult& pr : result.policies) {
        out += pr.label;
        out += ',';
        if (pr.spec.kind == PolicyKind::EpsilonGreedy)
            out += format_csv_double(*pr.spec.epsilon);
        out += ',';
        if (pr.spec.kind == PolicyKind::Sbs)
            out += format_csv_double(
                pr.spec.theta_c_hat ? *pr.spec.theta_c_hat : result.steady.theta_c);
        out += ',';
        out += std::to_string(config.horizon);
        out += ',';
        out += std::to_string(pr.report.runs);
        out += ',';
        out += format_csv_double(pr.report.cum_regret.back());
        out += ',';
        out += format_csv_double(pr.report.stderr_regret.back());
        out += ',';
        out += format_csv_double(pr.report.n_sub_mean.back());
        out += ',';
        out += std::to_string(pr.report.diverged_runs);
        out += ',';
        out += scaling_class_name(pr.scaling.classification);
        out += '\n';
    }
    return out;
}

std::string policy_csv_filename(int ordinal, const PolicyResult& policy) {
    return "policy" + std::to_string(ordinal) + "_" + policy.label + ".csv";
}

void write_text_file(const std::string& path, const std::string& contents) {
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw IoError("cannot open output file: " + path);
    file.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    file.flush();
    if (!file) throw IoError("cannot write output file: " + path);
}

void write_experiment_csvs(const ExperimentConfig& config,
                           const ExperimentResult& result) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(config.output_path, ec);
    if (ec)
        throw IoError("cannot create output directory '" + config.output_path +
                      "': " + ec.message());
    const fs::path dir(config.output_path);
    for (std::size_t p = 0; p < result.policies.size(); ++p) {
        const std::string name =
            policy_csv_filename(static_cast<int>(p), result.policies[p]);
        write_text_file((dir / name).string(), policy_csv(result.policies[p]));
    }
    write_text_file((dir / "summary.csv").string(), summary_csv(config, result));
}

EpsilonSweepResult cmd_epsilon_sweep(const ExperimentConfig& config,
                                     const std::vector<double>& epsilons,
                                     int workers) {
    if (epsilons.empty())
        throw ConfigError("at least one exploration rate is required", "epsilons");
    for (std::size_t i = 0; i < epsilons.size(); ++i)
        if (!(epsilons[i] > 0.0 && epsilons[i] < 1.0))
            fail("exploration rate must be in (0, 1)",
                 "epsilons[" + std::to_string(i) + "]");

    validate_config(config);
    const SteadyState steady = make_steady_state(config.model);
    const ChannelBank bank(config.thetas);

    EpsilonSweepResult result;
    result.theta_c = steady.theta_c;
    result.stability_bound = epsilon_stability_bound(bank, steady.theta_c);

    ExperimentConfig sweep_config = config;
    sweep_config.policies.clear();
    for (const double eps : epsilons) {
        PolicySpec spec;
        spec.kind = PolicyKind::EpsilonGreedy;
        spec.epsilon = eps;
        sweep_config.policies.push_back(spec);
    }
    const ExperimentResult mc = run_experiment(sweep_config, workers);

    for (std::size_t i = 0; i < epsilons.size(); ++i) {
        EpsilonSweepRow row;
        row.epsilon = epsilons[i];
        row.theta_tilde = epsilon_greedy_asymptotic_theta(bank, epsilons[i]);
        row.analytic_stable = row.theta_tilde > steady.theta_c;
        const ExpectedCovarianceSeries recursion = expected_series(
            config.model, steady, row.theta_tilde, config.horizon,
            config.trace_cap);
        row.recursion_trace_final = recursion.traces.back();
        row.recursion_hit_cap = recursion.traces.back() >= config.trace_cap;
        row.mc_final_mean_trace = mc.policies[i].report.mean_trace.back();
        row.mc_diverged_fraction =
            static_cast<double>(mc.policies[i].report.diverged_runs) /
            static_cast<double>(mc.policies[i].report.runs);
        result.rows.push_back(row);
    }
    return result;
}

std::string epsilon_sweep_csv(const EpsilonSweepResult& result) {
    std::string out =
        "epsilon,theta_tilde,stability_bound,analytic_label,recursion_label,"
        "recursion_trace_final,mc_final_mean_trace,mc_diverged_fraction\n";
    for (const EpsilonSweepRow& row : result.rows) {
        out += format_csv_double(row.epsilon);
        out += ',';
        out += format_csv_double(row.theta_tilde);
        out += ',';
        out += format_csv_double(result.stability_bound);
        out += ',';
        out += row.analytic_stable ? "stable" : "unstable";
        out += ',';
        out += row.recursion_hit_cap ? "unstable" : "stable";
        out += ',';
        out += format_csv_double(row.recursion_trace_final);
        out += ',';
        out += format_csv_double(row.mc_final_mean_trace);
        out += ',';
        out += format_csv_double(row.mc_diverged_fraction);
        out += '\n';
    }
    return out;
}

const std::vector<BenchmarkRow>& benchmark_rows() {
    static const std::vector<BenchmarkRow> rows = [] {
        const auto scalar = [](double v) {
            Eigen::MatrixXd m(1, 1);
            m(0, 0) = v;
            return m;
        };
        Eigen::MatrixXd A1 = scalar(1.45);
        Eigen::MatrixXd A2(2, 2);
        A2 << 1.2, 0.1, 0.2, 1.1;
        Eigen::MatrixXd A3(2, 2);
        A3 << 1.5, 0.2, 0.3, 0.9;
        Eigen::MatrixXd C2(1, 2);
        C2 << 1.0, 1.0;

        const auto make = [&](const Eigen::MatrixXd& A, std::vector<double> thetas,
                              double epsilon, double theta_c, double r_eps,
                              double r_ts, double r_obs, double r_sbs) {
            BenchmarkRow row;
            row.model.A = A;
            row.model.C = A.rows() == 1 ? scalar(1.0) : C2;
            row.model.Q = Eigen::MatrixXd::Identity(A.rows(), A.cols());
            row.model.R = scalar(1.0);
            row.thetas = std::move(thetas);
            row.epsilon = epsilon;
            row.theta_c = theta_c;
            row.reference_regret[0] = r_eps;
            row.reference_regret[1] = r_ts;
            row.reference_regret[2] = r_obs;
            row.reference_regret[3] = r_sbs;
            return row;
        };

        std::vector<BenchmarkRow> all;
        all.push_back(make(A1, {0.8, 0.75, 0.55, 0.5}, 0.12, 0.524,
                           263, 143, 136, 135));
        all.push_back(make(A1, {0.7, 0.6, 0.5, 0.4}, 0.18, 0.524,
                           996, 679, 596, 603));
        all.push_back(make(A1, {0.6, 0.5, 0.4, 0.3}, 0.22, 0.524,
                           10319, 8253, 6823, 6276));
        all.push_back(make(A2, {0.7, 0.6, 0.4, 0.3}, 0.10, 0.408,
                           582, 295, 274, 273));
        all.push_back(make(A2, {0.65, 0.55, 0.45, 0.35}, 0.12, 0.408,
                           886, 517, 473, 483));
        all.push_back(make(A2, {0.55, 0.45, 0.35, 0.25}, 0.18, 0.408,
                           4723, 3424, 2727, 2430));
        all.push_back(make(A3, {0.9, 0.8, 0.7, 0.5}, 0.14, 0.603,
                           290, 104, 98, 97));
        all.push_back(make(A3, {0.8, 0.7, 0.6, 0.5}, 0.18, 0.603,
                           803, 403, 354, 363));
        all.push_back(make(A3, {0.7, 0.6, 0.5, 0.4}, 0.22, 0.603,
                           7185, 6178, 3903, 3106));
        return all;
    }();
    return rows;
}

TableResult cmd_table1(const std::vector<int>& rows, long runs, int horizon,
                       std::uint64_t seed, int workers) {
    if (runs < 1000)
        throw ConfigError("benchmark table needs at least 1000 runs", "runs");
    if (horizon < 1) throw ConfigError("must be at least 1", "horizon");
    const auto& all_rows = benchmark_rows();
    std::vector<int> selection = rows;
    if (selection.empty()) {
        for (int r = 1; r <= static_cast<int>(all_rows.size()); ++r)
            selection.push_back(r);
    }
    for (const int r : selection)
        if (r < 1 || r > static_cast<int>(all_rows.size()))
            throw ConfigError("row selection must be between 1 and " +
                                  std::to_string(all_rows.size()),
                              "rows");

    TableResult result;
    result.horizon = horizon;
    result.runs = runs;

    for (const int r : selection) {
        const BenchmarkRow& row = all_rows[static_cast<std::size_t>(r - 1)];
        ExperimentConfig config;
        config.model = row.model;
        config.thetas = row.thetas;
        config.horizon = horizon;
        config.runs = runs;
        // One independent seed lane per table row.
        config.seed = derive_stream_seed(seed, 1000 + static_cast<std::uint64_t>(r),
                                         0);
        config.output_path = ".";
        PolicySpec eps;
        eps.kind = PolicyKind::EpsilonGreedy;
        eps.epsilon = row.epsilon;
        config.policies.push_back(eps);
        config.policies.push_back(PolicySpec{PolicyKind::ThompsonSampling, {}, {}, {}});
        config.policies.push_back(PolicySpec{PolicyKind::Obs, {}, {}, {}});
        config.policies.push_back(PolicySpec{PolicyKind::Sbs, {}, {}, {}});

        const ExperimentResult experiment = run_experiment(config, workers);
        for (std::size_t p = 0; p < experiment.policies.size(); ++p) {
            const PolicyResult& pr = experiment.policies[p];
            TableEntry entry;
            entry.row = r;
            entry.kind = pr.spec.kind;
            entry.epsilon =
                pr.spec.kind == PolicyKind::EpsilonGreedy ? *pr.spec.epsilon : 0.0;
            entry.theta_c = row.theta_c;
            entry.reference_regret = row.reference_regret[p];
            entry.measured_regret = pr.report.cum_regret.back();
            entry.stderr_regret = pr.report.stderr_regret.back();
            entry.diverged_runs = pr.report.diverged_runs;
            result.entries.push_back(entry);
        }
    }
    return result;
}

std::string table1_csv(const TableResult& result) {
    std::string out =
        "row,policy,epsilon,theta_c,T,runs,reference_regret,measured_regret,"
        "stderr_regret,diverged_runs\n";
    for (const TableEntry& entry : result.entries) {
        out += std::to_string(entry.row);
        out += ',';
        out += policy_kind_name(entry.kind);
        out += ',';
        if (entry.kind == PolicyKind::EpsilonGreedy)
            out += format_csv_double(entry.epsilon);
        out += ',';
        out += format_csv_double(entry.theta_c);
        out += ',';
        out += std::to_string(result.horizon);
        out += ',';
        out += std::to_string(result.runs);
        out += ',';
        out += format_csv_double(entry.reference_regret);
        out += ',';
        out += format_csv_double(entry.measured_regret);
        out += ',';
        out += format_csv_double(entry.stderr_regret);
        out += ',';
        out += std::to_string(entry.diverged_runs);
        out += '\n';
    }
    return out;
}

ScalingResult cmd_scaling(const ExperimentConfig& config,
                          const std::vector<int>& horizons, int workers) {
    if (horizons.empty())
        throw ConfigError("at least one horizon is required", "horizons");
    for (std::size_t i = 0; i < horizons.size(); ++i) {
        if (horizons[i] < 1)
            fail("must be at least 1", "horizons[" + std::to_string(i) + "]");
        if (i > 0 && horizons[i] <= horizons[i - 1])
            fail("must be strictly increasing",
                 "horizons[" + std::to_string(i) + "]");
    }

    ExperimentConfig scaled = config;
    scaled.horizon = horizons.back();
    const ExperimentResult experiment = run_experiment(scaled, workers);

    ScalingResult result;
    for (const PolicyResult& pr : experiment.policies) {
        for (const int horizon : horizons) {
            ScalingRow row;
            row.label = pr.label;
            row.epsilon = pr.spec.kind == PolicyKind::EpsilonGreedy
                              ? *pr.spec.epsilon
                              : 0.0;
            row.horizon = horizon;
            row.cum_regret =
                pr.report.cum_regret[static_cast<std::size_t>(horizon - 1)];
            row.stderr_regret =
                pr.report.stderr_regret[static_cast<std::size_t>(horizon - 1)];
            row.classification = pr.scaling.classification;
            result.rows.push_back(std::move(row));
        }
    }
    return result;
}

std::string scaling_csv(const ScalingResult& result) {
    std::string out =
        "policy,epsilon,T,cum_regret,stderr_regret,scaling_class\n";
    for (const ScalingRow& row : result.rows) {
        out += row.label;
        out += ',';
        if (row.epsilon > 0.0) out += format_csv_double(row.epsilon);
        out += ',';
        out += std::to_string(row.horizon);
        out += ',';
        out += format_csv_double(row.cum_regret);
        out += ',';
        out += format_csv_double(row.stderr_regret);
        out += ',';
        out += scaling_class_name(row.classification);
        out += '\n';
    }
    return out;
}

}  // namespace remest
