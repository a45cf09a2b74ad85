// Command-line front end: embed, extract, link, calibrate, plot, zoo.
// Exit codes: 0 pass, 1 input error, 2 certified calibration violation.

#include "forge/embedding.hpp"
#include "forge/io.hpp"
#include "forge/link.hpp"
#include "forge/plot.hpp"
#include "forge/zoo.hpp"

#include "CLI11.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <algorithm>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using namespace forge;
using io::Json;

namespace {

constexpr int kPass = 0;
constexpr int kInputError = 1;
constexpr int kViolation = 2;

struct Options {
    std::size_t grid_m = 0;
    std::string norm = "linf";
    std::string eps_ladder;
    std::string u_box = "-3,3";
    std::string u_res = "1/8";
    std::uint64_t seed = 0;
    std::string out = "out";
};

std::vector<Rational> parse_list(const std::string& text) {
    std::vector<Rational> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.empty()) throw std::invalid_argument("empty entry in list '" + text + "'");
        out.push_back(parse_rational(item));
    }
    if (out.empty()) throw std::invalid_argument("empty list");
    return out;
}

std::pair<Rational, Rational> parse_box(const std::string& text) {
    auto v = parse_list(text);
    if (v.size() != 2 || v[1] <= v[0]) throw std::invalid_argument("--u-box must be lo,hi with lo < hi");
    return {v[0], v[1]};
}

Rational parse_positive(const std::string& text, const char* what) {
    Rational r = parse_rational(text);
    if (sgn(r) <= 0) throw std::invalid_argument(std::string(what) + " must be positive");
    return r;
}

std::vector<std::string> split_names(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

Extraction extract_with_doubling(const PolyhedralLoss& L, std::size_t m, std::size_t max_m, std::size_t* attempts) {
    for (;;) {
        ++*attempts;
        try {
            return extract_embedded_loss(L, m);
        } catch (const GridTooCoarse& e) {
            if (2 * m > max_m) throw std::runtime_error(std::string(e.what()) + "; giving up at grid " + std::to_string(m));
            std::cerr << "grid " << m << " too coarse, doubling\n";
            m *= 2;
        }
    }
}

std::size_t new_sets(const OptimalSetFamily& coarse, const OptimalSetFamily& fine) {
    std::size_t fresh = 0;
    for (const auto& f : fine.members) {
        bool seen = std::any_of(coarse.members.begin(), coarse.members.end(), [&](const OptimalSet& c) {
            return contains(c.set, f.set) && contains(f.set, c.set);
        });
        if (!seen) ++fresh;
    }
    return fresh;
}

// Smallest doubling of m whose optimal-set family the next grid does not extend.
std::size_t stable_family_grid(const PolyhedralLoss& L, std::size_t m, std::size_t max_m) {
    auto family = enumerate_optimal_sets(L, m);
    while (2 * m <= max_m) {
        auto finer = enumerate_optimal_sets(L, 2 * m);
        if (new_sets(family, finer) == 0) return m;
        std::cerr << "grid " << m << " missed optimal sets, doubling\n";
        family = std::move(finer);
        m *= 2;
    }
    throw std::runtime_error("optimal-set family still growing at grid " + std::to_string(m));
}

int cmd_embed(const std::string& loss_path, const Options& opt) {
    auto loss = io::discrete_loss_from_json(io::read_json(loss_path));
    auto [L, phi] = conjugate_surrogate(loss);
    std::size_t m = opt.grid_m ? opt.grid_m : 12;
    auto check = verify_embedding(L, loss, phi, m);
    Json report;
    report["grid_m"] = m;
    report["seed"] = opt.seed;
    report["bayes_gap"] = to_string(check.bayes_gap);
    report["verified"] = check.verified();
    io::write_json(fs::path(opt.out) / "surrogate.json", io::to_json(L));
    io::write_json(fs::path(opt.out) / "embedding.json", io::to_json(phi));
    io::write_json(fs::path(opt.out) / "report.json", report);
    std::cout << "surrogate: d = " << L.dim() << ", bayes gap " << to_string(check.bayes_gap) << " on grid " << m
              << (check.verified() ? ", embedding verified\n" : ", embedding NOT verified\n");
    return check.verified() ? kPass : kInputError;
}

int cmd_extract(const std::string& surrogate_path, std::size_t max_m, const Options& opt) {
    auto L = io::polyhedral_loss_from_json(io::read_json(surrogate_path));
    std::size_t attempts = 0;
    auto x = extract_with_doubling(L, opt.grid_m ? opt.grid_m : 4, max_m, &attempts);
    // Doubling certificate: the finer grid finds the same loss and no new optimal sets.
    bool stable = false;
    std::size_t fresh = 0;
    for (;;) {
        auto finer = extract_embedded_loss(L, 2 * x.grid_m);
        stable = equal_up_to_relabeling(finer.loss, x.loss);
        fresh = new_sets(x.family, finer.family);
        if ((stable && fresh == 0) || 4 * x.grid_m > max_m) break;
        std::cerr << "grid " << x.grid_m << " missed optimal sets, doubling\n";
        x = std::move(finer);
        ++attempts;
    }
    Json report;
    report["grid_m"] = x.grid_m;
    report["seed"] = opt.seed;
    report["attempts"] = attempts;
    report["reports"] = x.loss.num_reports();
    report["optimal_sets"] = x.family.members.size();
    report["bayes_gap"] = to_string(bayes_risk_gap(L, x.loss, x.grid_m));
    Json doubling;
    doubling["grid_m"] = 2 * x.grid_m;
    doubling["loss_stable"] = stable;
    doubling["new_optimal_sets"] = fresh;
    report["doubling"] = doubling;
    io::write_json(fs::path(opt.out) / "loss.json", io::to_json(x.loss));
    io::write_json(fs::path(opt.out) / "embedding.json", io::to_json(x.embedding));
    io::write_json(fs::path(opt.out) / "report.json", report);
    std::cout << "extracted " << x.loss.num_reports() << " reports on grid " << x.grid_m << "; doubling to "
              << 2 * x.grid_m << ": loss " << (stable ? "stable" : "CHANGED") << ", " << fresh << " new optimal sets\n";
    for (std::size_t r = 0; r < x.loss.num_reports(); ++r)
        std::cout << "  " << x.loss.report(r) << " -> (" << to_string(x.loss.row(r)) << ")\n";
    return stable && fresh == 0 ? kPass : kInputError;
}

int cmd_link(const std::string& surrogate_path, const std::string& embedding_path, const std::string& tie_break,
             std::size_t samples, const Options& opt) {
    auto L = io::polyhedral_loss_from_json(io::read_json(surrogate_path));
    std::size_t m = opt.grid_m ? opt.grid_m : 8;
    Embedding phi;
    if (!embedding_path.empty()) {
        phi = io::embedding_from_json(io::read_json(embedding_path));
    } else {
        std::size_t attempts = 0;
        auto x = extract_with_doubling(L, m, 64, &attempts);
        phi = x.embedding;
        m = std::max(m, x.grid_m);
    }
    m = stable_family_grid(L, m, 64);
    auto ladder = opt.eps_ladder.empty() ? default_epsilon_ladder() : parse_list(opt.eps_ladder);
    Norm norm = parse_norm(opt.norm);
    auto family = enumerate_optimal_sets(L, m);
    auto cert = max_valid_epsilon(family, norm, ladder);

    io::LinkFile file;
    file.norm = norm;
    file.epsilon = cert.epsilon;
    file.grid_m = m;
    file.tie_break = split_names(tie_break);
    file.embedding = phi;
    Link link({norm, cert.epsilon, family, phi, file.tie_break});

    // Random nonemptiness spot check of Psi; the certificate already proves it.
    auto [lo, hi] = parse_box(opt.u_box);
    std::mt19937_64 rng(opt.seed);
    std::uniform_int_distribution<long> pick(0, 1024);
    std::size_t empty = 0;
    for (std::size_t i = 0; i < samples; ++i) {
        Vec u(L.dim());
        for (auto& x : u) x = lo + (hi - lo) * Rational(pick(rng), 1024);
        if (link.envelope(u).empty()) ++empty;
    }
    std::size_t self_linked = 0;
    for (std::size_t r = 0; r < phi.size(); ++r) self_linked += link(phi.point(r)) == phi.reports()[r];

    file.certificate = io::to_json(cert);
    file.certificate["seed"] = opt.seed;
    file.certificate["samples"] = samples;
    file.certificate["empty_envelopes"] = empty;
    file.certificate["self_linked_reports"] = self_linked;
    io::write_json(fs::path(opt.out) / "link.json", io::to_json(file));
    std::cout << "epsilon = " << to_string(cert.epsilon) << " (" << to_string(norm) << "), "
              << cert.checked.size() << " empty subfamilies checked";
    if (cert.has_threshold) std::cout << ", smallest separating radius " << to_string(cert.threshold);
    std::cout << "\n" << empty << " empty envelopes in " << samples << " samples; " << self_linked << "/" << phi.size()
              << " embedding points link to their own report\n";
    return empty == 0 ? kPass : kInputError;
}

// Extracted embeddings name reports by their points; match them to the
// discrete loss by the row L(phi(r)) when the names differ.
LinkFunction rename_to_loss(LinkFunction link, const Embedding& phi, const PolyhedralLoss& L, const DiscreteLoss& loss) {
    std::map<std::string, std::string> rename;
    for (std::size_t r = 0; r < phi.size(); ++r) {
        const auto& name = phi.reports()[r];
        if (std::find(loss.reports().begin(), loss.reports().end(), name) != loss.reports().end()) continue;
        Vec row = eval_loss(L, phi.point(r));
        std::size_t match = 0;
        while (match < loss.num_reports() && loss.row(match) != row) ++match;
        if (match == loss.num_reports())
            throw std::invalid_argument("link report " + name + " matches no report of the discrete loss");
        rename[name] = loss.report(match);
    }
    if (rename.empty()) return link;
    return [link = std::move(link), rename = std::move(rename)](const Vec& u) {
        auto r = link(u);
        auto it = rename.find(r);
        return it == rename.end() ? r : it->second;
    };
}

int cmd_calibrate(const std::string& surrogate_path, const std::string& link_path, const std::string& loss_path,
                  const std::string& single_p, const Options& opt) {
    auto L = io::polyhedral_loss_from_json(io::read_json(surrogate_path));
    auto file = io::link_file_from_json(io::read_json(link_path));
    auto loss = io::discrete_loss_from_json(io::read_json(loss_path));
    if (L.outcomes() != loss.outcomes()) throw std::invalid_argument("surrogate and discrete loss outcomes differ");
    auto link = io::make_link(file, L);
    if (file.kind == io::LinkKind::Thickened) link = rename_to_loss(link, file.embedding, L, loss);
    auto [lo, hi] = parse_box(opt.u_box);
    UGrid grid{Vec(L.dim(), lo), Vec(L.dim(), hi), parse_positive(opt.u_res, "--u-res")};
    std::size_t m = opt.grid_m ? opt.grid_m : 8;

    CalibrationAudit audit;
    if (!single_p.empty()) {
        auto entry = calibration_audit(L, link, loss, parse_list(single_p), grid);
        if (!entry.vacuous) audit.min_gap = entry.gap;
        audit.violations = entry.violation ? 1 : 0;
        audit.entries.push_back(std::move(entry));
    } else {
        audit = calibration_scan(L, link, loss, m, grid);
    }
    io::write_text(fs::path(opt.out) / "audit.csv", io::audit_csv(audit));
    Json summary;
    summary["grid_m"] = single_p.empty() ? Json(m) : Json(nullptr);
    summary["u_box"] = opt.u_box;
    summary["u_res"] = opt.u_res;
    summary["seed"] = opt.seed;
    summary["distributions"] = audit.entries.size();
    summary["min_gap"] = audit.min_gap ? Json(to_string(*audit.min_gap)) : Json(nullptr);
    summary["violations"] = audit.violations;
    summary["verdict"] = audit.violations ? "violation" : "no violation found";
    io::write_json(fs::path(opt.out) / "summary.json", summary);
    std::cout << audit.entries.size() << " distributions audited, min gap "
              << (audit.min_gap ? to_string(*audit.min_gap) : std::string("n/a")) << ", " << audit.violations
              << " certified violations\n";
    for (const auto& e : audit.entries) {
        if (!e.violation) continue;
        std::cout << "  violation at p = (" << to_string(e.p) << "): u = (" << to_string(e.witness) << ") links to "
                  << e.witness_report << " with zero excess loss\n";
        break;
    }
    return audit.violations ? kViolation : kPass;
}

int cmd_plot(const std::string& kind, const std::vector<std::string>& files, const std::string& title,
             const Options& opt) {
    if (kind == "simplex") {
        if (files.size() != 1) throw std::invalid_argument("plot simplex takes one loss spec");
        auto loss = io::discrete_loss_from_json(io::read_json(files[0]));
        io::write_text(fs::path(opt.out) / "cells.svg", simplex_cell_svg(loss, title));
        std::cout << "wrote " << (fs::path(opt.out) / "cells.svg").string() << "\n";
        return kPass;
    }
    if (kind == "envelope") {
        if (files.size() != 2) throw std::invalid_argument("plot envelope takes a surrogate spec and a link spec");
        auto L = io::polyhedral_loss_from_json(io::read_json(files[0]));
        auto link = io::make_thickened_link(io::link_file_from_json(io::read_json(files[1])), L);
        auto [lo, hi] = parse_box(opt.u_box);
        io::write_text(fs::path(opt.out) / "envelope.svg",
                       envelope_svg(link, lo, hi, parse_positive(opt.u_res, "--u-res"), title));
        std::cout << "wrote " << (fs::path(opt.out) / "envelope.svg").string() << "\n";
        return kPass;
    }
    throw std::invalid_argument("plot kind must be 'simplex' or 'envelope'");
}

SetFunction named_set_function(const std::string& spec, std::size_t k) {
    if (spec == "cardinality") return cardinality(k);
    if (spec == "nonempty") return indicator_nonempty(k);
    return io::set_function_from_json(io::read_json(spec));
}

int cmd_zoo(const std::string& name, std::size_t n, std::size_t k, const std::string& alpha,
            const std::string& set_function, const Options& opt) {
    fs::path out(opt.out);
    std::vector<std::string> written;
    auto emit = [&](const std::string& file, const Json& j) {
        io::write_json(out / file, j);
        written.push_back(file);
    };
    if (name == "zero-one") {
        emit("loss.json", io::to_json(zero_one(n)));
    } else if (name == "hinge") {
        emit("surrogate.json", io::to_json(hinge()));
        emit("loss.json", io::to_json(zero_one(2).scaled(2)));
    } else if (name == "abstain") {
        emit("loss.json", io::to_json(abstain_loss(n, parse_rational(alpha))));
    } else if (name == "abstain-surrogate") {
        emit("surrogate.json", io::to_json(abstain_surrogate(n)));
        emit("embedding.json", io::to_json(abstain_embedding(n)));
        emit("loss.json", io::to_json(abstain_loss(n, Rational(1, 2)).scaled(2)));
    } else if (name == "lovasz-hinge") {
        auto f = named_set_function(set_function, k);
        emit("set_function.json", io::to_json(f));
        emit("surrogate.json", io::to_json(lovasz_hinge(f)));
        emit("loss.json", io::to_json(lovasz_target_loss(f)));
    } else if (name == "top-k") {
        emit("loss.json", io::to_json(top_k_loss(n, k)));
        emit("surrogate.json", io::to_json(top_k_surrogate(n, k)));
    } else if (name == "embedded-top2") {
        emit("loss.json", io::to_json(embedded_top2_loss()));
    } else if (name == "hamming") {
        emit("loss.json", io::to_json(hamming(k)));
    } else {
        throw std::invalid_argument("unknown zoo entry '" + name +
                                    "'; known: zero-one, hinge, abstain, abstain-surrogate, lovasz-hinge, top-k, "
                                    "embedded-top2, hamming");
    }
    for (const auto& f : written) std::cout << "wrote " << (out / f).string() << "\n";
    return kPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Polyhedral surrogates, embeddings and calibrated links"};
    app.require_subcommand(1);
    Options opt;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--grid-m", opt.grid_m, "Simplex grid denominator");
        sub->add_option("--seed", opt.seed, "Seed for randomized checks");
        sub->add_option("--out", opt.out, "Output directory")->capture_default_str();
    };
    std::function<int()> action;

    std::string loss_path, surrogate_path, link_path, embedding_path, tie_break, single_p, title, kind, name, alpha = "1/2",
                                                                                                      set_function = "nonempty";
    std::vector<std::string> files;
    std::size_t max_m = 64, samples = 1000, n = 3, k = 2;

    auto* embed = app.add_subcommand("embed", "Build the conjugate surrogate embedding a discrete loss");
    embed->add_option("loss", loss_path, "Discrete loss spec")->required();
    add_common(embed);
    embed->callback([&] { action = [&] { return cmd_embed(loss_path, opt); }; });

    auto* extract = app.add_subcommand("extract", "Recover the discrete loss embedded by a polyhedral surrogate");
    extract->add_option("surrogate", surrogate_path, "Polyhedral loss spec")->required();
    extract->add_option("--max-grid-m", max_m, "Largest grid tried while doubling")->capture_default_str();
    add_common(extract);
    extract->callback([&] { action = [&] { return cmd_extract(surrogate_path, max_m, opt); }; });

    auto* link = app.add_subcommand("link", "Validate epsilon and write a thickened link");
    link->add_option("surrogate", surrogate_path, "Polyhedral loss spec")->required();
    link->add_option("--embedding", embedding_path, "Embedding spec (default: extract one)");
    link->add_option("--norm", opt.norm, "l1 or linf")->capture_default_str();
    link->add_option("--eps-ladder", opt.eps_ladder, "Descending candidates, e.g. 1,1/2,1/4");
    link->add_option("--tie-break", tie_break, "Preferred reports, comma separated");
    link->add_option("--samples", samples, "Random envelope checks")->capture_default_str();
    link->add_option("--u-box", opt.u_box, "Sampling box lo,hi")->capture_default_str();
    add_common(link);
    link->callback([&] { action = [&] { return cmd_link(surrogate_path, embedding_path, tie_break, samples, opt); }; });

    auto* calibrate = app.add_subcommand("calibrate", "Audit calibration of a surrogate and link");
    calibrate->add_option("surrogate", surrogate_path, "Polyhedral loss spec")->required();
    calibrate->add_option("link", link_path, "Link spec")->required();
    calibrate->add_option("loss", loss_path, "Discrete loss spec")->required();
    calibrate->add_option("--u-box", opt.u_box, "Surrogate box lo,hi")->capture_default_str();
    calibrate->add_option("--u-res", opt.u_res, "Surrogate grid step")->capture_default_str();
    calibrate->add_option("--p", single_p, "Audit a single distribution instead of the grid");
    add_common(calibrate);
    calibrate->callback([&] { action = [&] { return cmd_calibrate(surrogate_path, link_path, loss_path, single_p, opt); }; });

    auto* plot = app.add_subcommand("plot", "Draw SVG figures");
    plot->add_option("kind", kind, "simplex or envelope")->required();
    plot->add_option("files", files, "Loss spec, or surrogate and link specs")->required();
    plot->add_option("--title", title, "Figure title");
    plot->add_option("--u-box", opt.u_box, "Envelope box lo,hi")->capture_default_str();
    plot->add_option("--u-res", opt.u_res, "Envelope sampling step")->capture_default_str();
    add_common(plot);
    plot->callback([&] { action = [&] { return cmd_plot(kind, files, title, opt); }; });

    auto* zoo = app.add_subcommand("zoo", "Write spec files for a named loss family");
    zoo->add_option("name", name, "zero-one, hinge, abstain, abstain-surrogate, lovasz-hinge, top-k, embedded-top2, hamming")
        ->required();
    zoo->add_option("--n", n, "Number of outcomes")->capture_default_str();
    zoo->add_option("--k", k, "Set size or ground set size")->capture_default_str();
    zoo->add_option("--alpha", alpha, "Abstain cost")->capture_default_str();
    zoo->add_option("--set-function", set_function, "cardinality, nonempty, or a set-function spec file")
        ->capture_default_str();
    add_common(zoo);
    zoo->callback([&] { action = [&] { return cmd_zoo(name, n, k, alpha, set_function, opt); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kPass : kInputError;
    }
    try {
        return action();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    }
}
