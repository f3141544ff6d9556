#include "clucert/simulate.hpp"

#include "clucert/certainty.hpp"
#include "clucert/fanny.hpp"
#include "clucert/rng.hpp"
#include "csv_util.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

namespace clucert {

// ---------------------------------------------------------------------------
// Designs
// ---------------------------------------------------------------------------

namespace {

Vector latent2(Scalar a, Scalar b) {
    Vector u(2);
    u << a, b;
    return u;
}

Vector latent3(Scalar a, Scalar b, Scalar c) {
    Vector u(3);
    u << a, b, c;
    return u;
}

Scalar logistic(Scalar x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

BinaryDesign BinaryDesign::two_group() {
    BinaryDesign design;
    design.group_latents = {latent2(3, 0), latent2(0, 3)};
    design.hybrid_latent = latent2(1.5, 1.5);
    design.beta = 1.2;
    design.per_group = 20;
    design.features_per_latent = 10;
    design.intercept = solve_intercept(design);
    return design;
}

BinaryDesign BinaryDesign::three_group() {
    BinaryDesign design;
    design.group_latents = {latent3(3, 0, 0), latent3(0, 3, 0), latent3(0, 0, 3)};
    design.hybrid_latent = latent3(1, 1, 1);
    design.beta = 1.2;
    design.per_group = 20;
    design.features_per_latent = 8;
    design.intercept = solve_intercept(design);
    return design;
}

ContinuousDesign ContinuousDesign::two_group() {
    ContinuousDesign design;
    design.group_latents = {latent2(3, 0), latent2(0, 3)};
    design.hybrid_latent = latent2(1.5, 1.5);
    design.per_group = 20;
    design.features_per_latent = 10;
    return design;
}

ContinuousDesign ContinuousDesign::three_group() {
    ContinuousDesign design;
    design.group_latents = {latent3(3, 0, 0), latent3(0, 3, 0), latent3(0, 0, 3)};
    design.hybrid_latent = latent3(1, 1, 1);
    design.per_group = 20;
    design.features_per_latent = 8;
    return design;
}

Scalar solve_intercept(const BinaryDesign& design) {
    if (design.group_latents.empty()) throw_argument("design needs at least one group");
    if (!std::isfinite(design.beta)) throw_argument("beta must be finite");
    const int g = design.groups();
    const int dim = design.latent_dim();
    for (const Vector& u : design.group_latents)
        if (u.size() != dim) throw_argument("group latent dimensions disagree");

    // one marginal constraint per feature block: the average success
    // probability over the (equally weighted) group latents equals 1/2
    Scalar intercept = 0;
    for (int b = 0; b < dim; ++b) {
        auto residual = [&](Scalar t) {
            Scalar acc = 0;
            for (const Vector& u : design.group_latents) acc += logistic(t + design.beta * u(b));
            return acc / static_cast<Scalar>(g) - 0.5;
        };
        Scalar lo = -50, hi = 50;
        if (residual(lo) > 0 || residual(hi) < 0)
            throw_solver("intercept bracket [-50, 50] does not contain the root for block " +
                         std::to_string(b + 1));
        while (hi - lo > 1e-13) {
            const Scalar mid = 0.5 * (lo + hi);
            (residual(mid) < 0 ? lo : hi) = mid;
        }
        const Scalar t = 0.5 * (lo + hi);
        if (b == 0)
            intercept = t;
        else if (std::abs(t - intercept) > 1e-9)
            throw_solver("feature blocks require different intercepts; the single-intercept "
                         "model does not apply");
    }
    return intercept;
}

namespace {

// Shared layout: per_group individuals per group, labelled 1..G, then the
// hybrid as the last row. The hybrid carries placeholder group 1 and is
// excluded from rates through Dataset::hybrid.
template <typename Design>
Dataset layout_dataset(const Design& design) {
    Dataset data;
    data.features.resize(design.n(), design.p());
    data.groups.resize(static_cast<std::size_t>(design.n()));
    for (int g = 0; g < design.groups(); ++g)
        for (int i = 0; i < design.per_group; ++i)
            data.groups[static_cast<std::size_t>(g * design.per_group + i)] = g + 1;
    data.groups.back() = 1;
    data.hybrid = design.n() - 1;
    return data;
}

template <typename Design>
const Vector& latent_of(const Design& design, Index row) {
    if (row == design.n() - 1) return design.hybrid_latent;
    return design.group_latents[static_cast<std::size_t>(row / design.per_group)];
}

}  // namespace

Dataset gen_binary(const BinaryDesign& design, std::uint64_t seed) {
    Dataset data = layout_dataset(design);
    data.kind = DataKind::binary;
    auto rng = make_rng(seed);
    std::uniform_real_distribution<Scalar> unit(0.0, 1.0);
    for (Index i = 0; i < design.n(); ++i) {
        const Vector& u = latent_of(design, i);
        for (Index j = 0; j < design.p(); ++j) {
            const int block = static_cast<int>(j) / design.features_per_latent;
            const Scalar prob = logistic(design.intercept + design.beta * u(block));
            data.features(i, j) = unit(rng) < prob ? 1.0 : 0.0;
        }
    }
    return data;
}

Dataset gen_continuous(const ContinuousDesign& design, std::uint64_t seed) {
    if (!(design.noise_sd > 0)) throw_argument("noise standard deviation must be positive");
    Dataset data = layout_dataset(design);
    data.kind = DataKind::continuous;
    auto rng = make_rng(seed);
    std::normal_distribution<Scalar> noise(0.0, design.noise_sd);
    for (Index i = 0; i < design.n(); ++i) {
        const Vector& w = latent_of(design, i);
        for (Index j = 0; j < design.p(); ++j) {
            const int block = static_cast<int>(j) / design.features_per_latent;
            data.features(i, j) = w(block) + noise(rng);
        }
    }
    return data;
}

// ---------------------------------------------------------------------------
// Names
// ---------------------------------------------------------------------------

const char* design_name(DesignKind kind) {
    switch (kind) {
        case DesignKind::two_group_binary: return "two_group_binary";
        case DesignKind::three_group_binary: return "three_group_binary";
        case DesignKind::two_group_continuous: return "two_group_continuous";
        case DesignKind::three_group_continuous: return "three_group_continuous";
    }
    return "?";
}

DesignKind design_from_name(const std::string& name) {
    if (name == "two_group_binary") return DesignKind::two_group_binary;
    if (name == "three_group_binary") return DesignKind::three_group_binary;
    if (name == "two_group_continuous") return DesignKind::two_group_continuous;
    if (name == "three_group_continuous") return DesignKind::three_group_continuous;
    throw_argument("unknown design '" + name + "'");
}

const char* cluster_method_name(ClusterMethod method) {
    switch (method) {
        case ClusterMethod::pam: return "pam";
        case ClusterMethod::hierarchical: return "hierarchical";
        case ClusterMethod::kmeans: return "kmeans";
    }
    return "?";
}

ClusterMethod cluster_method_from_name(const std::string& name) {
    if (name == "pam") return ClusterMethod::pam;
    if (name == "hier" || name == "hierarchical") return ClusterMethod::hierarchical;
    if (name == "kmeans") return ClusterMethod::kmeans;
    throw_argument("unknown clustering method '" + name + "'");
}

// ---------------------------------------------------------------------------
// Scenario files
// ---------------------------------------------------------------------------

Scenario Scenario::parse(std::istream& in) {
    Scenario scenario;
    bool clusters_set = false;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string trimmed = detail::trim(line);
        if (trimmed.empty() || trimmed[0] == '#') continue;
        const auto eq = trimmed.find('=');
        if (eq == std::string::npos)
            throw_ingestion("line " + std::to_string(line_no) + ": expected 'key = value'");
        const std::string key = detail::trim(trimmed.substr(0, eq));
        const std::string value = detail::trim(trimmed.substr(eq + 1));
        if (key == "design") scenario.design = design_from_name(value);
        else if (key == "dissimilarity") scenario.dissimilarity = dissimilarity_from_name(value);
        else if (key == "clustering") scenario.clustering = cluster_method_from_name(value);
        else if (key == "linkage") scenario.linkage = linkage_from_name(value);
        else if (key == "clusters") { scenario.clusters = static_cast<int>(detail::parse_int(value, line_no)); clusters_set = true; }
        else if (key == "measure") scenario.measure = measure_from_name(value);
        else if (key == "exponent") { scenario.exponent = detail::parse_double(value, line_no); scenario.policy = ExponentPolicy::fixed; }
        else if (key == "tune_sd") { scenario.tune_target = detail::parse_double(value, line_no); scenario.policy = ExponentPolicy::tune_sd; }
        else if (key == "tune_rsm") { scenario.tune_target = detail::parse_double(value, line_no); scenario.policy = ExponentPolicy::tune_rsm; }
        else if (key == "replicates") scenario.replicates = static_cast<int>(detail::parse_int(value, line_no));
        else if (key == "seed") scenario.seed = static_cast<std::uint64_t>(detail::parse_int(value, line_no));
        else if (key == "kmeans_restarts") scenario.kmeans_restarts = static_cast<int>(detail::parse_int(value, line_no));
        else throw_ingestion("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    if (!clusters_set) {
        const bool three = scenario.design == DesignKind::three_group_binary ||
                           scenario.design == DesignKind::three_group_continuous;
        scenario.clusters = three ? 3 : 2;
    }
    return scenario;
}

Scenario Scenario::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw_ingestion("cannot open scenario file '" + path.string() + "'");
    return parse(in);
}

std::string Scenario::to_text() const {
    std::ostringstream out;
    out << "design = " << design_name(design) << "\n";
    out << "dissimilarity = " << dissimilarity_name(dissimilarity) << "\n";
    out << "clustering = " << cluster_method_name(clustering) << "\n";
    out << "linkage = " << linkage_name(linkage) << "\n";
    out << "clusters = " << clusters << "\n";
    out << "measure = " << measure_name(measure) << "\n";
    switch (policy) {
        case ExponentPolicy::fixed: out << "exponent = " << detail::fmt_full(exponent) << "\n"; break;
        case ExponentPolicy::tune_sd: out << "tune_sd = " << detail::fmt_full(tune_target) << "\n"; break;
        case ExponentPolicy::tune_rsm: out << "tune_rsm = " << detail::fmt_full(tune_target) << "\n"; break;
    }
    out << "replicates = " << replicates << "\n";
    out << "seed = " << seed << "\n";
    if (clustering == ClusterMethod::kmeans) out << "kmeans_restarts = " << kmeans_restarts << "\n";
    return out.str();
}

// ---------------------------------------------------------------------------
// Replication
// ---------------------------------------------------------------------------

namespace {

bool is_binary_design(DesignKind kind) {
    return kind == DesignKind::two_group_binary || kind == DesignKind::three_group_binary;
}

int design_groups(DesignKind kind) {
    return (kind == DesignKind::three_group_binary || kind == DesignKind::three_group_continuous)
               ? 3
               : 2;
}

void validate_scenario(const Scenario& scenario) {
    if (scenario.clusters != design_groups(scenario.design))
        throw_argument("simulated scenarios require clusters == group count so that clusters "
                       "can be matched to groups");
    if (is_binary_design(scenario.design)) {
        if (scenario.clustering == ClusterMethod::kmeans)
            throw_argument("k-means operates on continuous features");
    } else if (scenario.dissimilarity == DissimilarityKind::smd) {
        throw_argument("simple matching distance is defined for binary data");
    }
    if (scenario.measure == MeasureKind::fanny) {
        if (scenario.policy != ExponentPolicy::fixed)
            throw_argument("the fanny exponent is a fit parameter; tuning applies to the "
                           "silhouette and dissimilarity measures");
        if (!(scenario.exponent > 1.0)) throw_argument("membership exponent r must exceed 1");
    } else if (scenario.policy == ExponentPolicy::fixed && !(scenario.exponent > 0)) {
        throw_argument("exponent must be positive");
    }
}

ReplicateCache run_one_replicate(const Scenario& scenario, const BinaryDesign* binary,
                                 const ContinuousDesign* continuous, std::uint64_t rep_seed) {
    ReplicateCache cache;
    const Dataset data = binary ? gen_binary(*binary, rep_seed)
                                : gen_continuous(*continuous, rep_seed);
    const DissimilarityMatrix m = compute_dissimilarity(data, scenario.dissimilarity);

    Partition z;
    switch (scenario.clustering) {
        case ClusterMethod::pam:
            z = pam(m, scenario.clusters, rep_seed);
            break;
        case ClusterMethod::hierarchical:
            z = hierarchical(m, scenario.clusters, scenario.linkage);
            break;
        case ClusterMethod::kmeans:
            z = kmeans(data, scenario.clusters, rep_seed, scenario.kmeans_restarts);
            break;
    }

    switch (scenario.measure) {
        case MeasureKind::silhouette_based:
            cache.raw = shifted_silhouette_matrix(m, z);
            break;
        case MeasureKind::dissimilarity_based:
            cache.raw = average_dissimilarity_matrix(m, z);
            break;
        case MeasureKind::fanny: {
            FannyOptions options;
            options.exponent = scenario.exponent;
            options.seed = splitmix64(rep_seed);
            const FannyResult fit = fanny(m, scenario.clusters, options);
            cache.raw = fit.memberships;
            z = fit.hard();  // cluster/group matching follows the crisp fanny partition
            break;
        }
    }

    const ClusterMapping mapping = match_clusters(z, data.groups, data.hybrid);
    cache.group_column.resize(static_cast<std::size_t>(data.n()));
    cache.assigned_column.resize(static_cast<std::size_t>(data.n()));
    for (Index i = 0; i < data.n(); ++i) {
        cache.group_column[static_cast<std::size_t>(i)] =
            column_of_group(mapping, data.groups[static_cast<std::size_t>(i)]);
        cache.assigned_column[static_cast<std::size_t>(i)] = z.label(i) - 1;
    }
    cache.hybrid = *data.hybrid;
    cache.group1_column = column_of_group(mapping, 1);
    cache.ok = true;
    return cache;
}

}  // namespace

std::vector<ReplicateCache> build_replicate_caches(const Scenario& scenario, int replicates,
                                                   std::uint64_t seed) {
    if (replicates < 1) throw_argument("at least one replicate is required");
    validate_scenario(scenario);

    const bool binary = is_binary_design(scenario.design);
    BinaryDesign binary_design;
    ContinuousDesign continuous_design;
    if (binary)
        binary_design = design_groups(scenario.design) == 2 ? BinaryDesign::two_group()
                                                            : BinaryDesign::three_group();
    else
        continuous_design = design_groups(scenario.design) == 2 ? ContinuousDesign::two_group()
                                                                : ContinuousDesign::three_group();

    std::vector<ReplicateCache> caches(static_cast<std::size_t>(replicates));
    const unsigned hw = std::thread::hardware_concurrency();
    const int workers = std::max(1, std::min<int>(static_cast<int>(hw ? hw : 1), replicates));

    auto work = [&](int worker) {
        for (int rep = worker; rep < replicates; rep += workers) {
            auto& slot = caches[static_cast<std::size_t>(rep)];
            try {
                slot = run_one_replicate(scenario, binary ? &binary_design : nullptr,
                                         binary ? nullptr : &continuous_design,
                                         replicate_seed(seed, static_cast<std::uint64_t>(rep)));
            } catch (const std::exception& e) {
                slot.ok = false;
                slot.error = e.what();
            }
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int t = 0; t < workers; ++t) pool.emplace_back(work, t);
        for (auto& thread : pool) thread.join();
    }
    return caches;
}

Scalar pairwise_sum(const std::vector<Scalar>& values) {
    // deterministic reduction independent of how replicates were scheduled
    std::function<Scalar(std::size_t, std::size_t)> reduce =
        [&](std::size_t lo, std::size_t hi) -> Scalar {
        if (hi - lo <= 8) {
            Scalar acc = 0;
            for (std::size_t i = lo; i < hi; ++i) acc += values[i];
            return acc;
        }
        const std::size_t mid = lo + (hi - lo) / 2;
        return reduce(lo, mid) + reduce(mid, hi);
    };
    return values.empty() ? 0.0 : reduce(0, values.size());
}

namespace {

std::vector<ReplicateRecord> records_at(const std::vector<ReplicateCache>& caches,
                                        MeasureKind measure, Scalar exponent) {
    std::vector<ReplicateRecord> records;
    records.reserve(caches.size());
    for (std::size_t rep = 0; rep < caches.size(); ++rep) {
        const ReplicateCache& cache = caches[rep];
        ReplicateRecord record;
        record.replicate = static_cast<int>(rep) + 1;
        if (!cache.ok) {
            record.ok = false;
            record.error = cache.error;
            records.push_back(std::move(record));
            continue;
        }
        const CertaintyMatrix cm = certainty_at(cache.raw, measure, exponent);
        record.p_h1 = cm.p(cache.hybrid, cache.group1_column);
        Scalar sm = 0, pd = 0;
        Index counted = 0;
        for (Index i = 0; i < cm.n(); ++i) {
            if (i == cache.hybrid) continue;
            sm += 1.0 - cm.p(i, cache.group_column[static_cast<std::size_t>(i)]);
            pd += 1.0 - cm.p(i, cache.assigned_column[static_cast<std::size_t>(i)]);
            ++counted;
        }
        record.r_sm = sm / static_cast<Scalar>(counted);
        record.r_pd = pd / static_cast<Scalar>(counted);
        records.push_back(std::move(record));
    }
    return records;
}

CacheStats stats_of(const std::vector<ReplicateRecord>& records) {
    std::vector<Scalar> ph1, rsm, rpd;
    for (const auto& record : records) {
        if (!record.ok) continue;
        ph1.push_back(record.p_h1);
        rsm.push_back(record.r_sm);
        rpd.push_back(record.r_pd);
    }
    CacheStats stats;
    if (ph1.empty()) return stats;
    const Scalar n = static_cast<Scalar>(ph1.size());
    stats.mean_ph1 = pairwise_sum(ph1) / n;
    stats.r_sm = pairwise_sum(rsm) / n;
    stats.r_pd = pairwise_sum(rpd) / n;
    if (ph1.size() > 1) {
        std::vector<Scalar> sq(ph1.size());
        for (std::size_t i = 0; i < ph1.size(); ++i) {
            const Scalar d = ph1[i] - stats.mean_ph1;
            sq[i] = d * d;
        }
        stats.sd_ph1 = std::sqrt(pairwise_sum(sq) / (n - 1));
    }
    return stats;
}

}  // namespace

CacheStats evaluate_caches(const std::vector<ReplicateCache>& caches, MeasureKind measure,
                           Scalar exponent) {
    return stats_of(records_at(caches, measure, exponent));
}

ReplicationResult run_replications(const Scenario& scenario, int replicates,
                                   std::uint64_t seed) {
    const std::vector<ReplicateCache> caches = build_replicate_caches(scenario, replicates, seed);

    Scalar exponent = scenario.exponent;
    ReplicationSummary summary;
    if (scenario.policy != ExponentPolicy::fixed) {
        const bool sd_target = scenario.policy == ExponentPolicy::tune_sd;
        auto objective = [&](Scalar e) {
            const CacheStats stats = evaluate_caches(caches, scenario.measure, e);
            return sd_target ? stats.sd_ph1 : stats.r_sm;
        };
        const TuneResult tuned = tune_exponent(
            objective, sd_target ? TuneDirection::increasing : TuneDirection::decreasing,
            scenario.tune_target);
        exponent = tuned.exponent;
        summary.tuned = true;
        summary.tuning_warning = tuned.warning;
    }

    ReplicationResult result;
    result.records = records_at(caches, scenario.measure, exponent);
    const CacheStats stats = stats_of(result.records);
    summary.mean_ph1 = stats.mean_ph1;
    summary.sd_ph1 = stats.sd_ph1;
    summary.r_sm_mean = stats.r_sm;
    summary.r_pd_mean = stats.r_pd;
    summary.exponent = exponent;
    summary.failures = static_cast<int>(
        std::count_if(result.records.begin(), result.records.end(),
                      [](const ReplicateRecord& r) { return !r.ok; }));
    summary.replicates = static_cast<int>(result.records.size()) - summary.failures;
    result.summary = summary;
    return result;
}

}  // namespace clucert
