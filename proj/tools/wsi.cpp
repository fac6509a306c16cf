#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "wsi/clustering.hpp"
#include "wsi/context_vectorizer.hpp"
#include "wsi/dataset_io.hpp"
#include "wsi/embedding_store.hpp"
#include "wsi/error.hpp"
#include "wsi/evaluation.hpp"
#include "wsi/hyper_search.hpp"
#include "wsi/kernels.hpp"
#include "wsi/mt_labeler.hpp"
#include "wsi/text.hpp"
#include "wsi/weighting.hpp"

namespace fs = std::filesystem;

namespace {

// Writes to a file, or to stdout when the path is empty or "-".
class Output {
public:
    explicit Output(const std::string& path) {
        if (path.empty() || path == "-") return;
        file_.open(path, std::ios::binary);
        if (!file_) throw wsi::DataError("cannot write " + path);
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

wsi::Dataset load_dataset(const std::string& path) {
    wsi::Dataset ds = wsi::parse_dataset(path);
    for (const auto& w : ds.warnings) std::cerr << "warning: " << w << '\n';
    return ds;
}

wsi::EmbeddingModel load_model(const std::string& path, const std::string& format) {
    const auto f = format == "auto" ? wsi::guess_embedding_format(path) : wsi::parse_embedding_format(format);
    wsi::EmbeddingModel model = wsi::load_embeddings(path, f);
    if (model.meta().duplicates > 0)
        std::cerr << "warning: " << model.meta().duplicates << " duplicate words in " << path << " (last kept)\n";
    return model;
}

wsi::IdfTable idf_from_dataset(const wsi::Dataset& ds) {
    wsi::IdfBuilder b;
    for (const auto& inst : ds.instances) b.add_document(inst.tokens);
    return std::move(b).finish();
}

wsi::IdfTable resolve_idf(const std::string& path, const wsi::Dataset& ds) {
    if (!path.empty()) return wsi::read_idf(path);
    std::cerr << "note: no --idf given; document frequencies taken from the dataset contexts\n";
    return idf_from_dataset(ds);
}

wsi::Chi2Table resolve_chi2(const std::string& path, const wsi::Dataset& ds) {
    return path.empty() ? wsi::build_chi2(ds) : wsi::read_chi2(path);
}

std::optional<double> parse_preference(const std::string& s) {
    if (s == "auto") return std::nullopt;
    double v = 0.0;
    try {
        std::size_t used = 0;
        v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
    } catch (const std::exception&) {
        throw wsi::ConfigError("--preference must be a number or 'auto' (got '" + s + "')");
    }
    if (!(v >= -20.0 && v <= 5.0)) throw wsi::ConfigError("--preference must lie in [-20, 5]");
    return v;
}

wsi::Labeling labels_from_predictions(const wsi::Dataset& pred) {
    wsi::Labeling labels;
    for (std::size_t i = 0; i < pred.instances.size(); ++i) {
        const std::string& cell = pred.rows[i][pred.predict_column];
        if (!cell.empty()) labels.assignments[pred.instances[i].context_id] = cell;
    }
    return labels;
}

std::string file_safe(std::string s) {
    for (char& c : s)
        if (c == '/' || c == '\\' || c == '\0') c = '_';
    return s;
}

struct Common {
    unsigned jobs = 1;
    std::uint64_t seed = 0;
    std::string isa = "auto";
};

void apply_isa(const std::string& isa) {
    if (isa == "auto") return;
    const auto want = isa == "avx2" ? wsi::kernels::Isa::avx2 : wsi::kernels::Isa::scalar;
    if (!wsi::kernels::isa_available(want)) throw wsi::ConfigError("--isa " + isa + " is not available on this CPU");
    wsi::kernels::set_active_isa(want);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Word sense induction by clustering weighted context embeddings"};
    app.option_defaults()->always_capture_default();
    app.require_subcommand(1);
    app.fallthrough();
    app.set_help_all_flag("--help-all", "Show help for every subcommand");

    Common common;
    app.add_option("--jobs", common.jobs, "Worker threads for per-word and per-configuration work")
        ->check(CLI::Range(1u, 1024u));
    app.add_option("--seed", common.seed, "Seed for sampled outputs");
    app.add_option("--isa", common.isa, "Vector kernel variant")
        ->check(CLI::IsMember({"auto", "scalar", "avx2"}));

    // build-idf
    auto* idf_cmd = app.add_subcommand("build-idf", "Count document frequencies into an idf cache");
    std::string idf_corpus;
    std::string idf_dataset;
    std::string idf_out;
    auto* corpus_opt = idf_cmd->add_option("--corpus", idf_corpus, "Plain-text corpus, one document per line")
                           ->check(CLI::ExistingFile);
    auto* ds_opt =
        idf_cmd->add_option("--dataset", idf_dataset, "Use the contexts of a dataset as documents")->check(CLI::ExistingFile);
    corpus_opt->excludes(ds_opt);
    idf_cmd->add_option("--out", idf_out, "Output idf cache")->required();

    // build-chi2
    auto* chi2_cmd = app.add_subcommand("build-chi2", "Compute target/word chi-square associations");
    std::string chi2_dataset;
    std::string chi2_out;
    chi2_cmd->add_option("--dataset", chi2_dataset, "Dataset TSV")->required()->check(CLI::ExistingFile);
    chi2_cmd->add_option("--out", chi2_out, "Output chi2 cache")->required();

    // cluster
    auto* cl_cmd = app.add_subcommand("cluster", "Cluster the contexts of every target word");
    std::string cl_emb;
    std::string cl_format = "auto";
    std::string cl_dataset;
    std::string cl_idf;
    std::string cl_chi2;
    std::string cl_out;
    std::string cl_vectors;
    std::string cl_algo = "agglomerative";
    int cl_k = 2;
    std::string cl_linkage = "ward";
    std::string cl_metric = "euclidean";
    double cl_damping = 0.5;
    std::string cl_preference = "auto";
    int cl_max_iter = 200;
    int cl_window = 15;
    double cl_p_tfidf = 1.0;
    double cl_p_chi2 = 1.0;
    cl_cmd->add_option("--embeddings", cl_emb, "Embedding file")->required()->check(CLI::ExistingFile);
    cl_cmd->add_option("--format", cl_format, "Embedding format")->check(CLI::IsMember({"auto", "text", "binary"}));
    cl_cmd->add_option("--dataset", cl_dataset, "Dataset TSV")->required()->check(CLI::ExistingFile);
    cl_cmd->add_option("--idf", cl_idf, "idf cache (default: built from the dataset contexts)")->check(CLI::ExistingFile);
    cl_cmd->add_option("--chi2", cl_chi2, "chi2 cache (default: built from the dataset)")->check(CLI::ExistingFile);
    cl_cmd->add_option("--out", cl_out, "Dataset with predict_sense_id filled (- for stdout)");
    cl_cmd->add_option("--vectors-out", cl_vectors, "Also write the context vectors");
    cl_cmd->add_option("--algo", cl_algo, "Clustering algorithm")
        ->check(CLI::IsMember({"agglomerative", "affinity_propagation", "ap"}));
    cl_cmd->add_option("--k", cl_k, "Number of clusters (agglomerative)")->check(CLI::Range(1, 14));
    cl_cmd->add_option("--linkage", cl_linkage, "Linkage")->check(CLI::IsMember({"ward", "average", "complete"}));
    cl_cmd->add_option("--metric", cl_metric, "Distance")->check(CLI::IsMember({"euclidean", "manhattan", "cosine"}));
    cl_cmd->add_option("--damping", cl_damping, "Affinity propagation damping, in [0.5, 1)");
    cl_cmd->add_option("--preference", cl_preference, "Affinity propagation preference in [-20, 5], or auto (median)");
    cl_cmd->add_option("--max-iter", cl_max_iter, "Affinity propagation iteration cap")->check(CLI::PositiveNumber);
    cl_cmd->add_option("--convergence-window", cl_window, "Iterations with a stable exemplar set")
        ->check(CLI::PositiveNumber);
    cl_cmd->add_option("--p-tfidf", cl_p_tfidf, "tf-idf exponent, in [0, 2.5]");
    cl_cmd->add_option("--p-chi2", cl_p_chi2, "chi2 exponent, in [0, 2.5]");

    // evaluate
    auto* ev_cmd = app.add_subcommand("evaluate", "Per-word and aggregate ARI of predictions against gold senses");
    std::string ev_gold;
    std::string ev_pred;
    std::string ev_out;
    std::string ev_confusion;
    ev_cmd->add_option("--gold", ev_gold, "Dataset with gold_sense_id")->required()->check(CLI::ExistingFile);
    ev_cmd->add_option("--pred", ev_pred, "Dataset with predict_sense_id")->required()->check(CLI::ExistingFile);
    ev_cmd->add_option("--out", ev_out, "Report path (- for stdout)");
    ev_cmd->add_option("--confusion-dir", ev_confusion, "Write one confusion-matrix CSV per word here");

    // grid-search
    auto* gs_cmd = app.add_subcommand("grid-search", "Score every configuration of a search space on a labeled dataset");
    std::string gs_emb;
    std::string gs_format = "auto";
    std::string gs_dataset;
    std::string gs_idf;
    std::string gs_chi2;
    std::string gs_space;
    std::string gs_out;
    std::string gs_heatmap;
    std::string gs_sweep;
    bool gs_heatmap_default = false;
    gs_cmd->add_option("--embeddings", gs_emb, "Embedding file")->required()->check(CLI::ExistingFile);
    gs_cmd->add_option("--format", gs_format, "Embedding format")->check(CLI::IsMember({"auto", "text", "binary"}));
    gs_cmd->add_option("--dataset", gs_dataset, "Dataset TSV with gold senses")->required()->check(CLI::ExistingFile);
    gs_cmd->add_option("--idf", gs_idf, "idf cache (default: built from the dataset contexts)")->check(CLI::ExistingFile);
    gs_cmd->add_option("--chi2", gs_chi2, "chi2 cache (default: built from the dataset)")->check(CLI::ExistingFile);
    gs_cmd->add_option("--space", gs_space,
                       "Search space file (default: powers 0..2.5 step 0.5, k 1..14, ward/average/complete, euclidean)")
        ->check(CLI::ExistingFile);
    gs_cmd->add_option("--out", gs_out, "Ranked configurations (- for stdout)");
    gs_cmd->add_option("--heatmap", gs_heatmap, "CSV of ARI per power pair");
    gs_cmd->add_option("--sweep", gs_sweep, "CSV of ARI per (k, linkage)");
    gs_cmd->add_flag("--heatmap-default", gs_heatmap_default,
                     "Heatmap for the default clustering (k=2, ward, euclidean) instead of the best per cell");

    // norm-report
    auto* nr_cmd = app.add_subcommand("norm-report", "Sampled embedding norms against corpus frequency");
    std::string nr_emb;
    std::string nr_format = "auto";
    std::string nr_freq;
    std::string nr_out;
    std::size_t nr_sample = 1000;
    nr_cmd->add_option("--embeddings", nr_emb, "Embedding file")->required()->check(CLI::ExistingFile);
    nr_cmd->add_option("--format", nr_format, "Embedding format")->check(CLI::IsMember({"auto", "text", "binary"}));
    nr_cmd->add_option("--freq", nr_freq, "Frequency TSV word<TAB>count")->required()->check(CLI::ExistingFile);
    nr_cmd->add_option("--sample-size", nr_sample, "Words to sample")->check(CLI::PositiveNumber);
    nr_cmd->add_option("--out", nr_out, "Report path (- for stdout)");

    // mt-label
    auto* mt_cmd = app.add_subcommand("mt-label", "Label contexts by their majority target-word translation");
    std::string mt_translations;
    std::string mt_dataset;
    std::string mt_stemmer = "porter";
    std::string mt_out;
    mt_cmd->add_option("--translations", mt_translations, "TSV context_id<TAB>translation[,translation...]")
        ->required()
        ->check(CLI::ExistingFile);
    mt_cmd->add_option("--dataset", mt_dataset, "Fill predict_sense_id of this dataset (otherwise print id<TAB>label)")
        ->check(CLI::ExistingFile);
    mt_cmd->add_option("--stemmer", mt_stemmer, "Translation normalization")->check(CLI::IsMember({"porter", "identity"}));
    mt_cmd->add_option("--out", mt_out, "Output path (- for stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        apply_isa(common.isa);

        if (idf_cmd->parsed()) {
            wsi::IdfTable idf;
            if (!idf_dataset.empty()) {
                idf = idf_from_dataset(load_dataset(idf_dataset));
            } else if (!idf_corpus.empty()) {
                std::ifstream in(idf_corpus, std::ios::binary);
                if (!in) throw wsi::DataError("cannot open " + idf_corpus);
                wsi::IdfBuilder b;
                for (std::string line; std::getline(in, line);) b.add_document(wsi::tokenize(line));
                idf = std::move(b).finish();
            } else {
                throw wsi::ConfigError("build-idf needs --corpus or --dataset");
            }
            wsi::write_idf(fs::path(idf_out), idf);
        } else if (chi2_cmd->parsed()) {
            const auto ds = load_dataset(chi2_dataset);
            const auto chi2 = wsi::build_chi2(ds);
            if (chi2.degenerate) std::cerr << "warning: fewer than two target words; every chi2 value is 0\n";
            wsi::write_chi2(fs::path(chi2_out), chi2);
        } else if (cl_cmd->parsed()) {
            wsi::ClusteringConfig cc;
            cc.algorithm = wsi::parse_algorithm(cl_algo);
            cc.n_clusters = cl_k;
            cc.linkage = wsi::parse_linkage(cl_linkage);
            cc.metric = wsi::parse_metric(cl_metric);
            cc.damping = cl_damping;
            cc.preference = parse_preference(cl_preference);
            cc.max_iter = cl_max_iter;
            cc.convergence_window = cl_window;
            cc.validate();
            const wsi::WeightingConfig wc{cl_p_tfidf, cl_p_chi2};
            wc.validate();

            const auto ds = load_dataset(cl_dataset);
            const auto model = load_model(cl_emb, cl_format);
            const auto idf = resolve_idf(cl_idf, ds);
            const auto chi2 = resolve_chi2(cl_chi2, ds);
            const auto vectors = wsi::vectorize_all(ds, model, idf, chi2, wc, common.jobs);
            std::size_t n_empty = 0;
            for (const auto& v : vectors) n_empty += v.empty();
            if (n_empty > 0) std::cerr << "warning: " << n_empty << " contexts have no weighted in-vocabulary token\n";
            if (!cl_vectors.empty()) {
                Output vo(cl_vectors);
                wsi::write_vectors(vo.stream(), vectors);
            }

            wsi::Labeling labels;
            for (const auto& [target, idx] : ds.by_target) {
                std::vector<std::vector<double>> points;
                for (std::size_t i : idx) points.push_back(vectors[i].v);
                const auto res = wsi::cluster(points, cc);
                if (res.clamped)
                    std::cerr << "warning: '" << target << "' has " << points.size() << " contexts; k reduced to "
                              << res.k << '\n';
                if (cc.algorithm == wsi::Algorithm::affinity_propagation && !res.converged)
                    std::cerr << "warning: affinity propagation did not converge for '" << target << "'\n";
                for (std::size_t p = 0; p < idx.size(); ++p)
                    labels.assignments[ds.instances[idx[p]].context_id] = std::to_string(res.labels[p]);
            }
            Output out(cl_out);
            wsi::write_predictions(ds, labels, out.stream());
        } else if (ev_cmd->parsed()) {
            const auto gold = load_dataset(ev_gold);
            const auto pred = wsi::parse_dataset(ev_pred);
            const auto labels = labels_from_predictions(pred);
            const auto report = wsi::evaluate(gold, labels);
            if (report.excluded_without_gold > 0)
                std::cerr << "note: " << report.excluded_without_gold << " contexts without a gold sense skipped\n";
            Output out(ev_out);
            wsi::write_eval_report(out.stream(), report);
            if (!ev_confusion.empty()) {
                fs::create_directories(ev_confusion);
                for (const auto& [target, idx] : gold.by_target) {
                    std::vector<std::string> g;
                    std::vector<std::string> p;
                    for (std::size_t i : idx) {
                        const auto& inst = gold.instances[i];
                        if (!inst.gold_sense) continue;
                        g.push_back(*inst.gold_sense);
                        p.push_back(*labels.find(inst.context_id));
                    }
                    if (g.empty()) continue;
                    Output cm((fs::path(ev_confusion) / (file_safe(target) + ".csv")).string());
                    wsi::write_confusion_csv(cm.stream(), wsi::confusion_matrix(g, p));
                }
            }
        } else if (gs_cmd->parsed()) {
            const wsi::SearchSpace space = gs_space.empty() ? wsi::SearchSpace{} : wsi::read_search_space(gs_space);
            space.validate();
            const auto ds = load_dataset(gs_dataset);
            const auto model = load_model(gs_emb, gs_format);
            const auto idf = resolve_idf(gs_idf, ds);
            const auto chi2 = resolve_chi2(gs_chi2, ds);
            const auto result = wsi::grid_search(ds, model, idf, chi2, space, common.jobs);
            for (const auto& x : result.excluded) std::cerr << "note: excluded " << x << '\n';
            Output out(gs_out);
            wsi::write_ranked(out.stream(), result);
            if (!gs_heatmap.empty()) {
                std::optional<wsi::ClusteringConfig> fixed;
                if (gs_heatmap_default) fixed = wsi::ClusteringConfig{};
                Output h(gs_heatmap);
                wsi::write_heatmap_csv(h.stream(), wsi::export_power_heatmap(result, fixed));
            }
            if (!gs_sweep.empty()) {
                Output s(gs_sweep);
                wsi::write_sweep_csv(s.stream(), wsi::export_k_linkage_sweep(result));
            }
        } else if (nr_cmd->parsed()) {
            const auto model = load_model(nr_emb, nr_format);
            const auto freqs = wsi::load_frequency_table(nr_freq);
            const auto rows = wsi::norm_frequency_report(model, freqs, nr_sample, common.seed);
            Output out(nr_out);
            wsi::write_norm_report(out.stream(), rows);
        } else if (mt_cmd->parsed()) {
            const auto records = wsi::read_translations(mt_translations);
            const wsi::Stemmer stemmer{wsi::parse_stemmer(mt_stemmer)};
            const auto labels = wsi::label_by_translation(records, stemmer);
            Output out(mt_out);
            if (!mt_dataset.empty()) {
                wsi::write_predictions(load_dataset(mt_dataset), labels, out.stream());
            } else {
                for (const auto& [id, label] : labels.assignments) out.stream() << id << '\t' << label << '\n';
            }
        }
    } catch (const wsi::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const wsi::DataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
