#pragma once

// JSON spec files for losses, embeddings, set functions and links, plus the
// audit CSV. Rationals are written in canonical "n" or "n/d" form so that
// emit -> ingest -> emit is byte-identical.

#include "forge/embedding.hpp"
#include "forge/link.hpp"
#include "forge/polyhedral.hpp"
#include "forge/simplex_core.hpp"
#include "forge/zoo.hpp"

#include "json.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace forge::io {

using Json = nlohmann::ordered_json;

/// Parses a JSON string or number as an exact rational. Numbers go through
/// their decimal text, so 0.3 becomes 3/10.
Rational rational_from_json(const Json& j);
Vec vec_from_json(const Json& j);
Json to_json(const Vec& v);

DiscreteLoss discrete_loss_from_json(const Json& j);
Json to_json(const DiscreteLoss& loss);

PolyhedralLoss polyhedral_loss_from_json(const Json& j);
Json to_json(const PolyhedralLoss& loss);

/// Reads {"embedding": {report: [coords], ...}}.
Embedding embedding_from_json(const Json& j);
Json to_json(const Embedding& phi);

SetFunction set_function_from_json(const Json& j);
Json to_json(const SetFunction& f);

/// How a link file turns surrogate reports into discrete reports.
enum class LinkKind { Thickened, Sign, AbstainL1, AbstainLInf, TopK };

LinkKind parse_link_kind(const std::string& text);
std::string to_string(LinkKind kind);

/// A link file. Thickened links store the norm, epsilon, tie-break list,
/// embedding and the optimal-set grid; the family is recomputed from the
/// surrogate on load. Other kinds name a closed-form link.
struct LinkFile {
    LinkKind kind = LinkKind::Thickened;
    Norm norm = Norm::LInf;
    Rational epsilon;
    std::size_t grid_m = 0;
    std::vector<std::string> tie_break;
    Embedding embedding;
    std::size_t k = 0;             // top-k only
    Json certificate = Json::object();
};

LinkFile link_file_from_json(const Json& j);
Json to_json(const LinkFile& link);
Json to_json(const EpsilonCertificate& cert);

/// Evaluator for a link file against a surrogate; thickened links rebuild
/// the optimal-set family at link.grid_m.
LinkFunction make_link(const LinkFile& link, const PolyhedralLoss& surrogate);
/// The thickened link itself, for callers needing the envelope.
Link make_thickened_link(const LinkFile& link, const PolyhedralLoss& surrogate);

/// Columns: p, gap, witness, witness_report, verdict.
std::string audit_csv(const CalibrationAudit& audit);

Json read_json(const std::filesystem::path& path);
/// Writes dump(2) plus a trailing newline.
void write_json(const std::filesystem::path& path, const Json& j);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace forge::io
