// corrclust: command-line driver for the correlation clustering toolkit.
// Subcommands: synth, train, score, solve, classify, eval, reproduce.
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <atomic>
#include <charconv>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "corrclust/corrclust.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace corrclust;

// Defaults of the synthetic experiments: planted clusters carry two weakly
// linked sub-modes, and sigma is calibrated so thresholding a 16x16 instance
// at mu=1.5 lands near Rand index 0.87.
constexpr double kDefaultSigma = 1.2;
constexpr double kDefaultWeakJoin = -0.3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    require(out.good(), errc::io_error, "cannot write " + out_path);
    out << text;
    require(out.good(), errc::io_error, "write failed: " + out_path);
}

// "KxS" = K clusters of S elements, or an explicit comma list
std::vector<int> parse_sizes(const std::string& text) {
    auto parse_int = [&](const std::string& token) {
        int value = 0;
        auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
        if (ec != std::errc() || ptr != token.data() + token.size() || value <= 0)
            throw UsageError("bad size '" + token + "' in --sizes " + text);
        return value;
    };
    const auto x = text.find('x');
    if (x != std::string::npos) {
        const int k = parse_int(text.substr(0, x));
        const int s = parse_int(text.substr(x + 1));
        return std::vector<int>(k, s);
    }
    std::vector<int> sizes;
    std::stringstream stream(text);
    std::string token;
    while (std::getline(stream, token, ',')) sizes.push_back(parse_int(token));
    if (sizes.empty()) throw UsageError("--sizes is empty");
    return sizes;
}

// "0:B,1:U" maps class ids to group tags
std::map<int, std::string> parse_group_map(const std::string& text) {
    std::map<int, std::string> map;
    std::stringstream stream(text);
    std::string token;
    while (std::getline(stream, token, ',')) {
        const auto colon = token.find(':');
        if (colon == std::string::npos || colon + 1 == token.size())
            throw UsageError("bad entry '" + token + "' in --group-map (want class:tag)");
        int klass = 0;
        auto [ptr, ec] = std::from_chars(token.data(), token.data() + colon, klass);
        if (ec != std::errc() || ptr != token.data() + colon)
            throw UsageError("bad class id in --group-map entry '" + token + "'");
        map[klass] = token.substr(colon + 1);
    }
    if (map.empty()) throw UsageError("--group-map is empty");
    return map;
}

void check_format(const std::string& format) {
    if (format != "tsv") throw UsageError("--format supports only 'tsv' in v1");
}

int env_thread_cap() {
    const char* raw = std::getenv("CORRCLUST_THREADS");
    if (!raw) return int(std::thread::hardware_concurrency());
    int value = 0;
    auto [ptr, ec] = std::from_chars(raw, raw + std::string(raw).size(), value);
    if (ec != std::errc() || *ptr != '\0' || value <= 0)
        throw UsageError("CORRCLUST_THREADS must be a positive integer");
    return value;
}

// Runs fn(0..count-1) on up to CORRCLUST_THREADS workers. Each call writes
// only its own result slot, so the output is independent of scheduling.
template <class Fn>
void parallel_for_seeds(int count, Fn&& fn) {
    const int threads = std::clamp(env_thread_cap(), 1, std::max(count, 1));
    if (threads <= 1) {
        for (int k = 0; k < count; ++k) fn(k);
        return;
    }
    std::atomic<int> next{0};
    std::mutex error_lock;
    std::exception_ptr first_error;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (int k = next.fetch_add(1); k < count; k = next.fetch_add(1)) {
                try {
                    fn(k);
                } catch (...) {
                    std::lock_guard<std::mutex> guard(error_lock);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    for (auto& worker : pool) worker.join();
    if (first_error) std::rethrow_exception(first_error);
}

// ---------------------------------------------------------------------------
// report rendering
// ---------------------------------------------------------------------------

void flatten_tsv(const json& j, const std::string& prefix, std::ostream& out) {
    if (j.is_object()) {
        for (const auto& [key, value] : j.items())
            flatten_tsv(value, prefix.empty() ? key : prefix + "." + key, out);
        return;
    }
    out << prefix << '\t';
    if (j.is_null()) out << "n/a";
    else if (j.is_boolean()) out << (j.get<bool>() ? "yes" : "no");
    else if (j.is_string()) out << j.get<std::string>();
    else if (j.is_number_float()) out << format_number(j.get<double>());
    else out << j.dump();
    out << '\n';
}

json optional_json(const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
}

json pair_metrics_json(const PairCounts& counts) {
    const auto pr = cut_join_pr(counts);
    json j;
    j["tj"] = counts.tj;
    j["tc"] = counts.tc;
    j["fc"] = counts.fc;
    j["fj"] = counts.fj;
    j["ri"] = rand_index(counts);
    j["pc"] = optional_json(pr.pc);
    j["rc"] = optional_json(pr.rc);
    j["pj"] = optional_json(pr.pj);
    j["rj"] = optional_json(pr.rj);
    return j;
}

// ---------------------------------------------------------------------------
// seeded experiment tables
// ---------------------------------------------------------------------------

struct NumTable {
    std::string preamble;  // "#..." header lines
    std::vector<std::string> columns;
    std::vector<std::pair<std::string, std::vector<std::optional<double>>>> rows;

    std::string render() const {
        std::ostringstream out;
        out << preamble;
        out << "seed";
        for (const auto& column : columns) out << '\t' << column;
        out << '\n';
        for (const auto& [label, values] : rows) {
            out << label;
            for (const auto& value : values) out << '\t' << format_optional(value);
            out << '\n';
        }
        // column means over the defined entries
        out << "mean";
        for (std::size_t c = 0; c < columns.size(); ++c) {
            double sum = 0.0;
            int defined = 0;
            for (const auto& [label, values] : rows)
                if (values[c]) {
                    sum += *values[c];
                    ++defined;
                }
            out << '\t'
                << (defined > 0 ? format_number(sum / defined) : std::string("n/a"));
        }
        out << '\n';
        return out.str();
    }
};

struct ExperimentConfig {
    int seeds = 20;
    std::uint64_t seed_base = 0;
    double mu = 1.5;
    double sigma = kDefaultSigma;
    double mu_weak = kDefaultWeakJoin;
    int subtypes = 2;
    int subsample = 8;
    int max_passes = 100;
};

std::optional<double> opt_of(const std::optional<double>& v) { return v; }

NumTable run_threshold_vs_cc(const ExperimentConfig& cfg) {
    const auto truth = make_planted_partition({std::vector<int>(16, 16), 0});
    const auto subtypes = make_subtype_partition(truth, cfg.subtypes);
    const auto truth_y = labeling_from_partition(truth);
    NumTable table;
    {
        std::ostringstream preamble;
        preamble << "#experiment threshold-vs-cc seeds=" << cfg.seeds << " sizes=16x16 mu="
                 << format_number(cfg.mu) << " sigma=" << format_number(cfg.sigma)
                 << " subtypes=" << cfg.subtypes << " mu-weak=" << format_number(cfg.mu_weak)
                 << "\n";
        table.preamble = preamble.str();
    }
    table.columns = {"ri_thr", "ri_cc",  "pc_thr", "rc_thr", "pj_thr", "rj_thr",  "pc_cc",
                     "rc_cc",  "pj_cc",  "rj_cc",  "vi_cc",  "vi_fc_cc", "vi_fj_cc", "clusters_cc"};
    table.rows.resize(cfg.seeds);
    parallel_for_seeds(cfg.seeds, [&](int k) {
        const std::uint64_t seed = cfg.seed_base + std::uint64_t(k);
        const auto m = sample_logits_with_subtypes(truth, subtypes, {cfg.mu, cfg.mu, cfg.sigma},
                                                   cfg.mu_weak, seed);
        const auto thr = threshold_decisions(m);
        SolverConfig solver_cfg;
        solver_cfg.max_klj_passes = cfg.max_passes;
        const auto cc = solve(m, solver_cfg);
        const auto cc_y = labeling_from_partition(cc);
        const auto thr_counts = pair_counts(truth_y, thr);
        const auto cc_counts = pair_counts(truth_y, cc_y);
        const auto thr_pr = cut_join_pr(thr_counts);
        const auto cc_pr = cut_join_pr(cc_counts);
        const auto vi = variation_of_information(truth, cc);
        table.rows[k] = {std::to_string(seed),
                         {rand_index(thr_counts), rand_index(cc_counts), opt_of(thr_pr.pc),
                          opt_of(thr_pr.rc), opt_of(thr_pr.pj), opt_of(thr_pr.rj),
                          opt_of(cc_pr.pc), opt_of(cc_pr.rc), opt_of(cc_pr.pj), opt_of(cc_pr.rj),
                          vi.vi, vi.vi_fc, vi.vi_fj, double(cc.num_clusters())}};
    });
    return table;
}

struct SplitSpec {
    std::vector<int> base_sizes;   // classes of the familiar block, tag "B"
    std::vector<int> other_sizes;  // classes of the unfamiliar block
    std::string other_tag;         // "U" for unseen classes, "N" for noise
    double mu_base, mu_other, mu_cross;
};

NumTable run_split_experiment(const ExperimentConfig& cfg, const SplitSpec& spec,
                              const std::string& name) {
    std::vector<int> sizes = spec.base_sizes;
    sizes.insert(sizes.end(), spec.other_sizes.begin(), spec.other_sizes.end());
    const auto truth = make_planted_partition({sizes, 0});
    const auto truth_y = labeling_from_partition(truth);

    const auto base_truth = make_planted_partition({spec.base_sizes, 0});
    const auto other_truth = make_planted_partition({spec.other_sizes, 0});
    const auto base_subtypes = make_subtype_partition(base_truth, cfg.subtypes);
    const auto other_subtypes = make_subtype_partition(other_truth, cfg.subtypes);
    std::vector<int> base_classes, other_classes;
    for (int e = 0; e < base_truth.size(); ++e)
        base_classes.push_back(base_truth.cluster_of()[e]);
    const int offset = int(spec.base_sizes.size());
    for (int e = 0; e < other_truth.size(); ++e)
        other_classes.push_back(other_truth.cluster_of()[e] + offset);

    std::map<int, std::string> group_map;
    for (int k = 0; k < int(sizes.size()); ++k)
        group_map[k] = k < offset ? "B" : spec.other_tag;
    const auto groups = make_group_labels(truth, group_map);

    auto ordered = [](const std::string& a, const std::string& b) {
        return a <= b ? std::pair{a, b} : std::pair{b, a};
    };
    const std::vector<std::pair<std::string, std::string>> bucket_keys{
        ordered("B", "B"), ordered("B", spec.other_tag),
        ordered(spec.other_tag, spec.other_tag)};

    NumTable table;
    {
        std::ostringstream preamble;
        preamble << "#experiment " << name << " seeds=" << cfg.seeds << " base="
                 << spec.base_sizes.size() << "classes other=" << spec.other_sizes.size()
                 << "classes sigma=" << format_number(cfg.sigma) << "\n";
        table.preamble = preamble.str();
    }
    table.columns = {"ri_thr", "ri_cc"};
    for (const char* model : {"thr", "cc"})
        for (const auto& key : bucket_keys) {
            const std::string bucket = key.first + key.second;
            for (const char* metric : {"pj", "rj", "pc", "rc"})
                table.columns.push_back(std::string(model) + "_" + bucket + "_" + metric);
        }
    table.rows.resize(cfg.seeds);
    parallel_for_seeds(cfg.seeds, [&](int k) {
        const std::uint64_t seed = cfg.seed_base + std::uint64_t(k);
        const auto m_base =
            sample_logits_with_subtypes(base_truth, base_subtypes,
                                        {spec.mu_base, spec.mu_base, cfg.sigma}, cfg.mu_weak,
                                        Rng::derive(seed, 1));
        const auto m_other =
            sample_logits_with_subtypes(other_truth, other_subtypes,
                                        {spec.mu_other, spec.mu_other, cfg.sigma}, cfg.mu_weak,
                                        Rng::derive(seed, 2));
        const auto cross =
            sample_cross_logits(base_classes, other_classes,
                                {spec.mu_cross, spec.mu_cross, cfg.sigma}, Rng::derive(seed, 3));
        const auto merged = merge_instances(m_base, m_other, cross);

        const auto thr = threshold_decisions(merged);
        SolverConfig solver_cfg;
        solver_cfg.max_klj_passes = cfg.max_passes;
        const auto cc_y = labeling_from_partition(solve(merged, solver_cfg));

        std::vector<std::optional<double>> values;
        values.push_back(rand_index(pair_counts(truth_y, thr)));
        values.push_back(rand_index(pair_counts(truth_y, cc_y)));
        for (const auto* pred : {&thr, &cc_y}) {
            const auto buckets = subgroup_pr(truth_y, *pred, groups);
            for (const auto& key : bucket_keys) {
                const SubgroupBucket* found = nullptr;
                for (const auto& bucket : buckets)
                    if (bucket.tag_a == key.first && bucket.tag_b == key.second) found = &bucket;
                for (int metric = 0; metric < 4; ++metric) {
                    if (!found) {
                        values.push_back(std::nullopt);
                        continue;
                    }
                    const auto& pr = found->pr;
                    values.push_back(metric == 0   ? pr.pj
                                     : metric == 1 ? pr.rj
                                     : metric == 2 ? pr.pc
                                                   : pr.rc);
                }
            }
        }
        table.rows[k] = {std::to_string(seed), std::move(values)};
    });
    return table;
}

// mode index of each element within its class = rank of its sub-mode among
// the sub-modes of that class
std::vector<int> mode_labels(const Partition& truth, const Partition& subtypes) {
    std::vector<int> mode(truth.size(), 0);
    std::vector<int> next_mode(truth.num_clusters(), 0);
    for (const auto& sub : subtypes.clusters()) {
        const int klass = truth.cluster_of()[sub.front()];
        const int index = next_mode[klass]++;
        for (int e : sub) mode[e] = index;
    }
    return mode;
}

// Classification against known training clusters, clustering of the test set
// alone, and the joint +T protocol: cluster test plus a seeded training
// subsample together and read off the test part. Classes share their
// sub-modes across the two sets, so pair scores between a test and a
// training element follow the same three-level rule as within a set.
NumTable run_plus_t(const ExperimentConfig& cfg) {
    const auto test_truth = make_planted_partition({std::vector<int>(8, 16), 0});
    const auto train_truth = make_planted_partition({std::vector<int>(8, 32), 0});
    const auto test_subtypes = make_subtype_partition(test_truth, cfg.subtypes);
    const auto train_subtypes = make_subtype_partition(train_truth, cfg.subtypes);
    const auto test_modes = mode_labels(test_truth, test_subtypes);
    const auto train_modes = mode_labels(train_truth, train_subtypes);
    const auto test_y = labeling_from_partition(test_truth);
    std::vector<int> test_classes(test_truth.cluster_of());
    std::vector<int> train_classes(train_truth.cluster_of());
    const NoiseModel nm{cfg.mu, cfg.mu, cfg.sigma};

    NumTable table;
    {
        std::ostringstream preamble;
        preamble << "#experiment plus-t seeds=" << cfg.seeds << " test=8x16 train=8x32 subsample="
                 << cfg.subsample << " mu=" << format_number(cfg.mu) << " sigma="
                 << format_number(cfg.sigma) << " subtypes=" << cfg.subtypes << " mu-weak="
                 << format_number(cfg.mu_weak) << "\n";
        table.preamble = preamble.str();
    }
    table.columns = {"ca",   "ri_cls", "vi_cls", "ri_cc", "vi_cc",
                     "ri_t", "vi_t",   "clusters_cc", "clusters_t"};
    table.rows.resize(cfg.seeds);
    parallel_for_seeds(cfg.seeds, [&](int k) {
        const std::uint64_t seed = cfg.seed_base + std::uint64_t(k);
        const auto m_test = sample_logits_with_subtypes(test_truth, test_subtypes, nm,
                                                        cfg.mu_weak, Rng::derive(seed, 1));
        Rng cross_rng(Rng::derive(seed, 2));
        CrossScores cross(test_truth.size(), train_truth.size());
        for (int i = 0; i < cross.rows(); ++i)
            for (int j = 0; j < cross.cols(); ++j) {
                const bool same_class = test_classes[i] == train_classes[j];
                const bool same_mode = same_class && test_modes[i] == train_modes[j];
                const double mean = same_mode ? cfg.mu : (same_class ? cfg.mu_weak : -cfg.mu);
                cross.set(i, j, cross_rng.normal(mean, cfg.sigma));
            }

        // classification: maximally probable training cluster per element
        const auto assignment = assign_to_clusters(cross, train_truth);
        const double ca = classification_accuracy(assignment, test_classes);
        const auto cls_counts = pair_counts(test_y, induced_pair_labeling(assignment));
        const auto cls_vi = variation_of_information(
            test_truth, Partition::from_assignments(assignment));

        SolverConfig solver_cfg;
        solver_cfg.max_klj_passes = cfg.max_passes;

        // clustering of the test set alone
        const auto alone = solve(m_test, solver_cfg);
        const auto alone_counts = pair_counts(test_y, labeling_from_partition(alone));
        const auto alone_vi = variation_of_information(test_truth, alone);

        // +T: joint clustering with a training subsample
        Rng pick(seed, 3);
        std::vector<int> chosen;
        for (const auto& cluster : train_truth.clusters()) {
            const int take = std::min<int>(cfg.subsample, int(cluster.size()));
            auto ids = pick.sample_distinct(std::size_t(take), cluster.size());
            std::sort(ids.begin(), ids.end());
            for (auto id : ids) chosen.push_back(cluster[id]);
        }
        std::sort(chosen.begin(), chosen.end());
        const auto m_train = sample_logits_with_subtypes(train_truth, train_subtypes, nm,
                                                         cfg.mu_weak, Rng::derive(seed, 4));
        LogitMatrix m_sub(int(chosen.size()));
        for (int i = 0; i < int(chosen.size()); ++i)
            for (int j = i + 1; j < int(chosen.size()); ++j)
                m_sub.set(i, j, m_train(chosen[i], chosen[j]));
        CrossScores cross_sub(test_truth.size(), int(chosen.size()));
        for (int i = 0; i < test_truth.size(); ++i)
            for (int j = 0; j < int(chosen.size()); ++j)
                cross_sub.set(i, j, cross(i, chosen[j]));
        const auto merged = merge_instances(m_test, m_sub, cross_sub);
        const auto joint = restrict_to_prefix(solve(merged, solver_cfg), test_truth.size());
        const auto joint_counts = pair_counts(test_y, labeling_from_partition(joint));
        const auto joint_vi = variation_of_information(test_truth, joint);

        table.rows[k] = {std::to_string(seed),
                         {ca, rand_index(cls_counts), cls_vi.vi, rand_index(alone_counts),
                          alone_vi.vi, rand_index(joint_counts), joint_vi.vi,
                          double(alone.num_clusters()), double(joint.num_clusters())}};
    });
    return table;
}

std::string run_fig3_experiment(const ExperimentConfig& cfg) {
    const auto truth = make_planted_partition({std::vector<int>(8, 12), 0});
    const auto subtypes = make_subtype_partition(truth, cfg.subtypes);
    const auto m =
        sample_logits_with_subtypes(truth, subtypes, {cfg.mu, cfg.mu, cfg.sigma}, cfg.mu_weak,
                                    cfg.seed_base);
    SolverConfig solver_cfg;
    solver_cfg.max_klj_passes = cfg.max_passes;
    return render_fig3(truth, solve(m, solver_cfg));
}

// ---------------------------------------------------------------------------
// subcommands
// ---------------------------------------------------------------------------

struct SynthOptions {
    std::string sizes;
    double mu = 1.5, sigma = 1.0;
    std::optional<double> mu_join, mu_cut;
    int subtypes = 1;
    double mu_weak = 0.0;
    std::uint64_t seed = 0;
    std::string out_logits, out_truth, out_groups, out_features, out_classes;
    std::string group_map;
    int dim = 8;
    double separation = 10.0, feature_sigma = 1.0;
    std::string format = "tsv";
};

void run_synth(const SynthOptions& options) {
    check_format(options.format);
    const auto sizes = parse_sizes(options.sizes);
    const auto truth = make_planted_partition({sizes, options.seed});
    if (options.out_truth.empty() && options.out_logits.empty() && options.out_groups.empty() &&
        options.out_features.empty() && options.out_classes.empty())
        throw UsageError("nothing to do: give at least one --out-* path");
    if (options.subtypes < 1) throw UsageError("--subtypes must be >= 1");
    if (!options.out_truth.empty()) write_partition(truth, options.out_truth);
    if (!options.out_logits.empty()) {
        NoiseModel nm{options.mu_join.value_or(options.mu), options.mu_cut.value_or(options.mu),
                      options.sigma};
        const auto logits =
            options.subtypes == 1
                ? sample_logits(truth, nm, options.seed)
                : sample_logits_with_subtypes(truth, make_subtype_partition(truth, options.subtypes),
                                              nm, options.mu_weak, options.seed);
        write_logits(logits, options.out_logits);
    }
    if (!options.out_groups.empty()) {
        if (options.group_map.empty())
            throw UsageError("--out-groups needs --group-map class:tag,...");
        write_groups(make_group_labels(truth, parse_group_map(options.group_map)),
                     options.out_groups);
    }
    if (!options.out_features.empty() || !options.out_classes.empty()) {
        const auto data = sample_embeddings(sizes, options.dim, options.separation,
                                            options.feature_sigma, Rng::derive(options.seed, 17));
        if (!options.out_features.empty()) write_features(data.features, options.out_features);
        if (!options.out_classes.empty()) write_classes(data.class_of, options.out_classes);
    }
}

struct TrainOptions {
    std::string features, classes, out, loss_out;
    TrainConfig cfg;
    std::string format = "tsv";
};

void run_train(const TrainOptions& options) {
    check_format(options.format);
    const auto features = read_features(options.features);
    const auto classes = read_classes(options.classes);
    const auto ds = PairDataset::from_classes(features, classes);
    const auto result = train(ds, options.cfg);
    write_model(result.params, options.out);
    if (!options.loss_out.empty()) {
        std::ostringstream out;
        out << "#loss iterations=" << result.loss_history.size() << "\n";
        for (std::size_t t = 0; t < result.loss_history.size(); ++t)
            out << t << '\t' << format_number(result.loss_history[t], 17) << "\n";
        emit(out.str(), options.loss_out);
    }
}

struct ScoreOptions {
    std::string model, features, features2, out;
    std::string format = "tsv";
};

void run_score(const ScoreOptions& options) {
    check_format(options.format);
    const auto params = read_model(options.model);
    const auto features = read_features(options.features);
    if (options.features2.empty()) {
        write_logits(score_all(params, features), options.out);
    } else {
        const auto other = read_features(options.features2);
        write_cross(score_cross(params, features, other), options.out);
    }
}

struct SolveOptions {
    std::string logits, out;
    bool gaec_only = false, exact = false, threshold = false;
    int exact_limit = 14, max_passes = 100;
    double epsilon_gain = 0.0;
    std::string format = "tsv";
};

void run_solve(const SolveOptions& options) {
    check_format(options.format);
    if (options.exact_limit < 1 || options.exact_limit > 16)
        throw UsageError("--exact-limit must lie in [1,16]");
    if (options.max_passes < 1) throw UsageError("--max-passes must be >= 1");
    if (options.epsilon_gain < 0.0) throw UsageError("--epsilon-gain must be >= 0");
    if (int(options.gaec_only) + int(options.exact) + int(options.threshold) > 1)
        throw UsageError("--gaec-only, --exact and --threshold are mutually exclusive");
    const auto m = read_logits(options.logits);
    if (options.threshold) {
        // independent per-pair decisions; may not form a partition
        const auto decisions = threshold_decisions(m);
        write_pair_labeling(decisions, options.out);
        std::cout << "n\t" << m.size() << "\n"
                  << "consistent\t" << (is_consistent(decisions) ? "yes" : "no") << "\n"
                  << "objective\t" << format_number(objective_value(m, decisions), 17) << "\n";
        return;
    }
    SolverConfig cfg;
    cfg.max_klj_passes = options.max_passes;
    cfg.exact_limit = options.exact_limit;
    cfg.epsilon_gain = options.epsilon_gain;
    Partition result = options.exact      ? solve_exact(m, cfg.exact_limit)
                       : options.gaec_only ? solve_gaec(m)
                                           : solve(m, cfg);
    write_partition(result, options.out);
    std::cout << "n\t" << m.size() << "\n"
              << "clusters\t" << result.num_clusters() << "\n"
              << "objective\t" << format_number(objective_value(m, result), 17) << "\n";
}

struct ClassifyOptions {
    std::string cross, train_truth, out;
    std::string format = "tsv";
};

void run_classify(const ClassifyOptions& options) {
    check_format(options.format);
    const auto cross = read_cross(options.cross);
    const auto truth = read_partition(options.train_truth);
    write_assignments(assign_to_clusters(cross, truth), options.out);
}

struct EvalOptions {
    std::string truth, pred, groups, out, fig3;
    std::string report = "tsv";
};

void run_eval(const EvalOptions& options) {
    if (options.report != "tsv" && options.report != "json")
        throw UsageError("--report must be tsv or json");
    const auto truth = read_partition(options.truth);
    const auto truth_y = labeling_from_partition(truth);

    // the prediction may be a partition or a raw pair labeling
    std::ifstream peek(options.pred);
    require(peek.good(), errc::io_error, "cannot open " + options.pred);
    std::string first_line;
    std::getline(peek, first_line);
    peek.close();
    PairLabeling pred_y(1);
    if (first_line.rfind("#partition", 0) == 0)
        pred_y = labeling_from_partition(read_partition(options.pred));
    else
        pred_y = read_pair_labeling(options.pred);

    const auto counts = pair_counts(truth_y, pred_y);
    const bool forms_partition = is_consistent(pred_y);

    json report;
    report["n"] = truth.size();
    report["pi"] = forms_partition;
    report["pairs"] = pair_metrics_json(counts);
    std::string fig3_block;
    if (forms_partition) {
        const auto pred = partition_from_labeling(pred_y);
        const auto vi = variation_of_information(truth, pred);
        report["vi"] = vi.vi;
        report["vi_fc"] = vi.vi_fc;
        report["vi_fj"] = vi.vi_fj;
        report["pred_clusters"] = pred.num_clusters();
        report["truth_classes"] = truth.num_clusters();
        const auto table = contingency(truth, pred);
        const auto matching = match_clusters(table);
        report["matched_fraction"] = matching.matched_fraction;
        json contingency_json;
        contingency_json["counts"] = table.counts;
        contingency_json["row_sums"] = table.row_sums;
        contingency_json["col_sums"] = table.col_sums;
        contingency_json["matched_class_of_cluster"] = matching.class_of_cluster;
        contingency_json["fp_of_cluster"] = matching.fp_of_cluster;
        contingency_json["fn_of_class"] = matching.fn_of_class;
        report["contingency"] = contingency_json;
        fig3_block = render_fig3(truth, pred);
        if (!options.fig3.empty()) emit(fig3_block, options.fig3);
    } else {
        report["vi"] = nullptr;
        report["vi_fc"] = nullptr;
        report["vi_fj"] = nullptr;
        if (!options.fig3.empty())
            fail(errc::inconsistent_labeling,
                 "--fig3 needs a prediction that forms a partition");
    }
    if (!options.groups.empty()) {
        const auto groups = read_groups(options.groups);
        json buckets;
        for (const auto& bucket : subgroup_pr(truth_y, pred_y, groups))
            buckets[bucket.tag_a + bucket.tag_b] = pair_metrics_json(bucket.counts);
        report["buckets"] = buckets;
    }

    if (options.report == "json") {
        emit(report.dump(2) + "\n", options.out);
    } else {
        // key-value section followed by the cluster-vs-class matrix
        json flat = report;
        flat.erase("contingency");
        std::ostringstream out;
        out << "#eval n=" << truth.size() << "\n";
        flatten_tsv(flat, "", out);
        out << fig3_block;
        emit(out.str(), options.out);
    }
}

struct ReproduceOptions {
    std::string experiment;
    ExperimentConfig cfg;
    std::string out;
};

void run_reproduce(const ReproduceOptions& options) {
    const auto& cfg = options.cfg;
    if (cfg.seeds < 1) throw UsageError("--seeds must be >= 1");
    if (cfg.subtypes < 1) throw UsageError("--subtypes must be >= 1");
    if (options.experiment == "threshold-vs-cc") {
        emit(run_threshold_vs_cc(cfg).render(), options.out);
    } else if (options.experiment == "unseen") {
        SplitSpec spec{std::vector<int>(8, 16), std::vector<int>(6, 8), "U", cfg.mu, 0.8, 1.0};
        emit(run_split_experiment(cfg, spec, "unseen").render(), options.out);
    } else if (options.experiment == "noise") {
        SplitSpec spec{std::vector<int>(8, 16), std::vector<int>(16, 3), "N", cfg.mu, 0.8, 1.0};
        emit(run_split_experiment(cfg, spec, "noise").render(), options.out);
    } else if (options.experiment == "plus-t") {
        emit(run_plus_t(cfg).render(), options.out);
    } else if (options.experiment == "fig3") {
        emit(run_fig3_experiment(cfg), options.out);
    } else {
        throw UsageError("unknown experiment '" + options.experiment +
                         "' (threshold-vs-cc, unseen, noise, plus-t, fig3)");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"correlation clustering toolkit"};
    app.require_subcommand(1);

    SynthOptions synth_options;
    auto* synth_cmd = app.add_subcommand(
        "synth", "generate a planted instance with noisy pair scores");
    synth_cmd->add_option("--sizes", synth_options.sizes,
                          "cluster sizes, 'KxS' or comma list")->required();
    synth_cmd->add_option("--mu", synth_options.mu, "mean |score| of join and cut pairs");
    synth_cmd->add_option("--mu-join", synth_options.mu_join, "override join mean");
    synth_cmd->add_option("--mu-cut", synth_options.mu_cut, "override cut mean");
    synth_cmd->add_option("--sigma", synth_options.sigma, "score noise");
    synth_cmd->add_option("--subtypes", synth_options.subtypes,
                          "sub-modes per cluster (1 = homogeneous)");
    synth_cmd->add_option("--mu-weak", synth_options.mu_weak,
                          "mean score of same-cluster, cross-sub-mode pairs");
    synth_cmd->add_option("--seed", synth_options.seed, "random seed");
    synth_cmd->add_option("--out-logits", synth_options.out_logits, "pair score output");
    synth_cmd->add_option("--out-truth", synth_options.out_truth, "ground-truth partition output");
    synth_cmd->add_option("--out-groups", synth_options.out_groups, "group tag output");
    synth_cmd->add_option("--group-map", synth_options.group_map, "class:tag,... for --out-groups");
    synth_cmd->add_option("--out-features", synth_options.out_features, "embedding output");
    synth_cmd->add_option("--out-classes", synth_options.out_classes, "class label output");
    synth_cmd->add_option("--dim", synth_options.dim, "embedding dimension");
    synth_cmd->add_option("--separation", synth_options.separation, "class center separation");
    synth_cmd->add_option("--feature-sigma", synth_options.feature_sigma, "embedding noise");
    synth_cmd->add_option("--format", synth_options.format, "file format (tsv)");

    TrainOptions train_options;
    auto* train_cmd = app.add_subcommand("train", "fit the pairwise scorer");
    train_cmd->add_option("--features", train_options.features, "feature file")->required();
    train_cmd->add_option("--classes", train_options.classes, "class label file")->required();
    train_cmd->add_option("--out", train_options.out, "model output")->required();
    train_cmd->add_option("--lr", train_options.cfg.learning_rate, "learning rate");
    train_cmd->add_option("--batch", train_options.cfg.batch_size, "batch size (even)");
    train_cmd->add_option("--iters", train_options.cfg.iterations, "iterations");
    train_cmd->add_option("--seed", train_options.cfg.seed, "random seed");
    train_cmd->add_option("--tau", train_options.cfg.tau, "box constraint on parameters");
    train_cmd->add_option("--weight-decay", train_options.cfg.weight_decay, "decoupled decay");
    train_cmd->add_option("--loss-out", train_options.loss_out, "write the loss trajectory");
    train_cmd->add_option("--format", train_options.format, "file format (tsv)");

    ScoreOptions score_options;
    auto* score_cmd = app.add_subcommand("score", "materialize pair scores from a model");
    score_cmd->add_option("--model", score_options.model, "model file")->required();
    score_cmd->add_option("--features", score_options.features, "feature file")->required();
    score_cmd->add_option("--features2", score_options.features2,
                          "second feature file; scores the cross block instead");
    score_cmd->add_option("--out", score_options.out, "output path")->required();
    score_cmd->add_option("--format", score_options.format, "file format (tsv)");

    SolveOptions solve_options;
    auto* solve_cmd = app.add_subcommand("solve", "infer a maximally probable partition");
    solve_cmd->add_option("--logits", solve_options.logits, "pair score file")->required();
    solve_cmd->add_option("--out", solve_options.out, "partition output")->required();
    solve_cmd->add_flag("--gaec-only", solve_options.gaec_only, "stop after greedy contraction");
    solve_cmd->add_flag("--exact", solve_options.exact, "exhaustive optimum (small n)");
    solve_cmd->add_flag("--threshold", solve_options.threshold,
                        "per-pair decisions f >= 0 instead of a partition");
    solve_cmd->add_option("--exact-limit", solve_options.exact_limit, "max n for --exact");
    solve_cmd->add_option("--max-passes", solve_options.max_passes, "local search pass cap");
    solve_cmd->add_option("--epsilon-gain", solve_options.epsilon_gain,
                          "minimum improvement per accepted move");
    solve_cmd->add_option("--format", solve_options.format, "file format (tsv)");

    ClassifyOptions classify_options;
    auto* classify_cmd =
        app.add_subcommand("classify", "assign elements to maximally probable known clusters");
    classify_cmd->add_option("--cross", classify_options.cross, "cross score file")->required();
    classify_cmd->add_option("--train-truth", classify_options.train_truth,
                             "training partition")->required();
    classify_cmd->add_option("--out", classify_options.out, "assignment output")->required();
    classify_cmd->add_option("--format", classify_options.format, "file format (tsv)");

    EvalOptions eval_options;
    auto* eval_cmd = app.add_subcommand("eval", "compare a prediction against ground truth");
    eval_cmd->add_option("--truth", eval_options.truth, "truth partition file")->required();
    eval_cmd->add_option("--pred", eval_options.pred, "partition or pair file")->required();
    eval_cmd->add_option("--groups", eval_options.groups, "group tags for subgroup metrics");
    eval_cmd->add_option("--report", eval_options.report, "tsv or json");
    eval_cmd->add_option("--out", eval_options.out, "report path (default stdout)");
    eval_cmd->add_option("--fig3", eval_options.fig3, "write the cluster-vs-class matrix here");

    ReproduceOptions reproduce_options;
    auto* reproduce_cmd =
        app.add_subcommand("reproduce", "run a seeded end-to-end experiment table");
    reproduce_cmd->add_option("--experiment", reproduce_options.experiment,
                              "threshold-vs-cc, unseen, noise, plus-t, fig3")->required();
    reproduce_cmd->add_option("--seeds", reproduce_options.cfg.seeds, "number of seeds");
    reproduce_cmd->add_option("--seed-base", reproduce_options.cfg.seed_base, "first seed");
    reproduce_cmd->add_option("--mu", reproduce_options.cfg.mu, "mean |score|");
    reproduce_cmd->add_option("--sigma", reproduce_options.cfg.sigma, "score noise");
    reproduce_cmd->add_option("--mu-weak", reproduce_options.cfg.mu_weak,
                              "cross-sub-mode join mean for threshold-vs-cc");
    reproduce_cmd->add_option("--subtypes", reproduce_options.cfg.subtypes,
                              "sub-modes per cluster for threshold-vs-cc");
    reproduce_cmd->add_option("--subsample", reproduce_options.cfg.subsample,
                              "training elements per class for plus-t");
    reproduce_cmd->add_option("--max-passes", reproduce_options.cfg.max_passes,
                              "local search pass cap");
    reproduce_cmd->add_option("--out", reproduce_options.out, "table path (default stdout)");

    try {
        app.parse(argc, argv);
        if (synth_cmd->parsed()) run_synth(synth_options);
        if (train_cmd->parsed()) run_train(train_options);
        if (score_cmd->parsed()) run_score(score_options);
        if (solve_cmd->parsed()) run_solve(solve_options);
        if (classify_cmd->parsed()) run_classify(classify_options);
        if (eval_cmd->parsed()) run_eval(eval_options);
        if (reproduce_cmd->parsed()) run_reproduce(reproduce_options);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
