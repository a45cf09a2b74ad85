#include "forge/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace forge::io {

using forge::to_string;

namespace {

const Json& field(const Json& j, const char* name) {
    if (!j.is_object() || !j.contains(name)) throw std::invalid_argument(std::string("spec is missing field '") + name + "'");
    return j.at(name);
}

std::vector<std::string> strings_from_json(const Json& j, const char* what) {
    if (!j.is_array()) throw std::invalid_argument(std::string(what) + " must be a list of strings");
    std::vector<std::string> out;
    for (const auto& x : j) {
        if (!x.is_string()) throw std::invalid_argument(std::string(what) + " must be a list of strings");
        out.push_back(x.get<std::string>());
    }
    return out;
}

std::size_t count_from_json(const Json& j, const char* what) {
    if (!j.is_number_integer() || j.get<long long>() < 0)
        throw std::invalid_argument(std::string(what) + " must be a nonnegative integer");
    return j.get<std::size_t>();
}

}  // namespace

Rational rational_from_json(const Json& j) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return parse_rational(j.dump());
    if (j.is_number_float()) return parse_rational(j.dump());
    throw std::invalid_argument("expected a rational, got " + j.dump());
}

Vec vec_from_json(const Json& j) {
    if (!j.is_array()) throw std::invalid_argument("expected a list of rationals, got " + j.dump());
    Vec v;
    for (const auto& x : j) v.push_back(rational_from_json(x));
    return v;
}

Json to_json(const Vec& v) {
    Json j = Json::array();
    for (const auto& x : v) j.push_back(to_string(x));
    return j;
}

DiscreteLoss discrete_loss_from_json(const Json& j) {
    auto outcomes = strings_from_json(field(j, "outcomes"), "outcomes");
    auto reports = strings_from_json(field(j, "reports"), "reports");
    const Json& m = field(j, "matrix");
    if (!m.is_array()) throw std::invalid_argument("matrix must be a list of rows");
    std::vector<Vec> rows;
    for (const auto& row : m) rows.push_back(vec_from_json(row));
    return DiscreteLoss(OutcomeSpace(std::move(outcomes)), std::move(reports), std::move(rows));
}

Json to_json(const DiscreteLoss& loss) {
    Json j;
    j["outcomes"] = loss.outcomes().labels();
    j["reports"] = loss.reports();
    Json rows = Json::array();
    for (const auto& row : loss.matrix()) rows.push_back(to_json(row));
    j["matrix"] = std::move(rows);
    return j;
}

PolyhedralLoss polyhedral_loss_from_json(const Json& j) {
    std::size_t d = count_from_json(field(j, "d"), "d");
    auto outcomes = strings_from_json(field(j, "outcomes"), "outcomes");
    const Json& p = field(j, "pieces");
    if (!p.is_array()) throw std::invalid_argument("pieces must be a list per outcome");
    std::vector<std::vector<AffinePiece>> pieces;
    for (const auto& list : p) {
        if (!list.is_array()) throw std::invalid_argument("pieces must be a list per outcome");
        std::vector<AffinePiece> out;
        for (const auto& piece : list) out.push_back({vec_from_json(field(piece, "a")), rational_from_json(field(piece, "b"))});
        pieces.push_back(std::move(out));
    }
    return PolyhedralLoss(d, OutcomeSpace(std::move(outcomes)), std::move(pieces));
}

Json to_json(const PolyhedralLoss& loss) {
    Json j;
    j["d"] = loss.dim();
    j["outcomes"] = loss.outcomes().labels();
    Json all = Json::array();
    for (const auto& list : loss.all_pieces()) {
        Json out = Json::array();
        for (const auto& piece : list) {
            Json pj;
            pj["a"] = to_json(piece.a);
            pj["b"] = to_string(piece.b);
            out.push_back(std::move(pj));
        }
        all.push_back(std::move(out));
    }
    j["pieces"] = std::move(all);
    return j;
}

Embedding embedding_from_json(const Json& j) {
    const Json& e = field(j, "embedding");
    if (!e.is_object()) throw std::invalid_argument("embedding must map report names to points");
    Embedding phi;
    for (const auto& [name, point] : e.items()) phi.add(name, vec_from_json(point));
    return phi;
}

Json to_json(const Embedding& phi) {
    Json points = Json::object();
    for (std::size_t i = 0; i < phi.size(); ++i) points[phi.reports()[i]] = to_json(phi.point(i));
    Json j;
    j["embedding"] = std::move(points);
    return j;
}

SetFunction set_function_from_json(const Json& j) {
    return SetFunction(count_from_json(field(j, "k"), "k"), vec_from_json(field(j, "values")));
}

Json to_json(const SetFunction& f) {
    Json j;
    j["k"] = f.k;
    j["values"] = to_json(f.values);
    return j;
}

LinkKind parse_link_kind(const std::string& text) {
    if (text == "thickened") return LinkKind::Thickened;
    if (text == "sign") return LinkKind::Sign;
    if (text == "abstain-l1") return LinkKind::AbstainL1;
    if (text == "abstain-linf") return LinkKind::AbstainLInf;
    if (text == "top-k") return LinkKind::TopK;
    throw std::invalid_argument("unknown link kind '" + text + "'");
}

std::string to_string(LinkKind kind) {
    switch (kind) {
        case LinkKind::Thickened: return "thickened";
        case LinkKind::Sign: return "sign";
        case LinkKind::AbstainL1: return "abstain-l1";
        case LinkKind::AbstainLInf: return "abstain-linf";
        case LinkKind::TopK: return "top-k";
    }
    throw std::logic_error("bad link kind");
}

LinkFile link_file_from_json(const Json& j) {
    LinkFile link;
    link.kind = parse_link_kind(j.value("kind", std::string("thickened")));
    if (link.kind == LinkKind::TopK) link.k = count_from_json(field(j, "k"), "k");
    if (link.kind != LinkKind::Thickened) return link;
    link.norm = parse_norm(field(j, "norm").get<std::string>());
    link.epsilon = rational_from_json(field(j, "epsilon"));
    if (sgn(link.epsilon) <= 0) throw std::invalid_argument("epsilon must be positive");
    link.grid_m = count_from_json(field(j, "grid_m"), "grid_m");
    if (link.grid_m == 0) throw std::invalid_argument("grid_m must be at least 1");
    if (j.contains("tie_break")) link.tie_break = strings_from_json(j.at("tie_break"), "tie_break");
    link.embedding = embedding_from_json(j);
    if (j.contains("certificate")) link.certificate = j.at("certificate");
    return link;
}

Json to_json(const LinkFile& link) {
    Json j;
    j["kind"] = to_string(link.kind);
    if (link.kind == LinkKind::TopK) j["k"] = link.k;
    if (link.kind != LinkKind::Thickened) return j;
    j["norm"] = to_string(link.norm);
    j["epsilon"] = to_string(link.epsilon);
    j["grid_m"] = link.grid_m;
    j["tie_break"] = link.tie_break;
    j["embedding"] = to_json(link.embedding).at("embedding");
    j["certificate"] = link.certificate;
    return j;
}

Json to_json(const EpsilonCertificate& cert) {
    Json j;
    j["epsilon"] = to_string(cert.epsilon);
    j["threshold"] = cert.has_threshold ? Json(to_string(cert.threshold)) : Json(nullptr);
    j["intersecting_subfamilies"] = cert.intersecting_visited;
    Json checked = Json::array();
    for (const auto& c : cert.checked) {
        Json cj;
        cj["members"] = c.members;
        cj["radius"] = to_string(c.radius);
        checked.push_back(std::move(cj));
    }
    j["empty_subfamilies"] = std::move(checked);
    return j;
}

Link make_thickened_link(const LinkFile& link, const PolyhedralLoss& surrogate) {
    if (link.kind != LinkKind::Thickened) throw std::invalid_argument("link file does not describe a thickened link");
    LinkSpec spec;
    spec.norm = link.norm;
    spec.epsilon = link.epsilon;
    spec.family = enumerate_optimal_sets(surrogate, link.grid_m);
    spec.embedding = link.embedding;
    spec.tie_break = link.tie_break;
    return Link(std::move(spec));
}

LinkFunction make_link(const LinkFile& link, const PolyhedralLoss& surrogate) {
    switch (link.kind) {
        case LinkKind::Thickened: {
            auto built = std::make_shared<Link>(make_thickened_link(link, surrogate));
            return [built](const Vec& u) { return (*built)(u); };
        }
        case LinkKind::Sign:
            return [](const Vec& u) { return sign_link(u); };
        case LinkKind::AbstainL1: {
            std::size_t n = surrogate.num_outcomes();
            return [n](const Vec& u) { return abstain_link_l1(n, u); };
        }
        case LinkKind::AbstainLInf: {
            std::size_t n = surrogate.num_outcomes();
            return [n](const Vec& u) { return abstain_link_linf(n, u); };
        }
        case LinkKind::TopK: {
            std::size_t k = link.k;
            return [k](const Vec& u) { return top_k_link(u, k); };
        }
    }
    throw std::logic_error("bad link kind");
}

std::string audit_csv(const CalibrationAudit& audit) {
    std::ostringstream out;
    out << "p,gap,witness,witness_report,verdict\n";
    for (const auto& e : audit.entries) {
        out << to_string(e.p, " ") << ',';
        if (e.vacuous) {
            out << ",,,vacuous\n";
            continue;
        }
        out << to_string(e.gap) << ',' << to_string(e.witness, " ") << ',' << e.witness_report << ','
            << (e.violation ? "violation" : "ok") << '\n';
    }
    return out.str();
}

Json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path.string());
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw std::invalid_argument(path.string() + ": " + e.what());
    }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

void write_json(const std::filesystem::path& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

}  // namespace forge::io
