#pragma once

// JSON wire formats for every artifact the tools exchange: graphs, functions,
// divisors, semimodules, evaluation matrices, games, certificates, and
// constraint systems.  Emission is deterministic — object keys appear in a
// fixed order and rationals print in canonical reduced form — so identical
// inputs always serialize to byte-identical documents.  Parsers are strict:
// unknown shapes, missing keys, and malformed rationals raise
// std::invalid_argument with a "<context>: ..." diagnostic.

#include <string>

#include "json.hpp"
#include "tropgraph/gadgets.hpp"
#include "tropgraph/game.hpp"
#include "tropgraph/semimodule.hpp"

namespace tropgraph {

using Json = nlohmann::ordered_json;

// ---- scalars ---------------------------------------------------------------
// Rationals travel as strings "p" or "p/q" (reduced, q > 0); the infinite
// tropical scalar travels as "inf".
Json rat_json(const Rat& q);
Rat rat_from_json(const Json& j, const std::string& ctx);
Json trop_json(const Trop& t);
Trop trop_from_json(const Json& j, const std::string& ctx);

// ---- graphs ----------------------------------------------------------------
// { "vertices": [ids], "edges": [{"id", "ends": [v0, v1], "length": "p/q"}],
//   "basepoint": id }
Json graph_to_json(const MetricGraph& g);
MetricGraph graph_from_json(const Json& j);

// ---- functions -------------------------------------------------------------
// { "name", "edges": { edge id: {"breaks": [...], "slopes": [ints],
//   "start_value": "p/q"} }, "isolated": { vertex id: "p/q" } }; edges and
// vertices that are omitted carry the value infinity.  Empty "edges" /
// "isolated" objects are dropped on emission.
Json function_to_json(const MetricGraph& g, const TropFunction& f);
TropFunction function_from_json(const MetricGraph& g, const Json& j);

// ---- divisors --------------------------------------------------------------
// { point: coefficient } with vertex points as "name" and interior points as
// "edge@offset"; zero coefficients never appear.
Json divisor_to_json(const MetricGraph& g, const Divisor& d);
Divisor divisor_from_json(const MetricGraph& g, const Json& j);

// ---- semimodules and evaluation matrices -----------------------------------
// { "graph": <graph doc> | "<file path>", "generators": [<function docs>] }.
// A string graph entry is loaded from the file, resolved against base_dir.
Json semimodule_to_json(const Semimodule& m);
Semimodule semimodule_from_json(const Json& j, const std::string& base_dir = ".");

// { "points": ["u", "e@1/2", ...], "rows": [["p/q", ...], ...] }
Json eval_matrix_to_json(const MetricGraph& g, const EvalMatrix& b);

// ---- games and certificates ------------------------------------------------
// { "states": [ids], "max_actions": { state: { action: { min action:
//   {"payoff": "p/q", "transitions": [[state, "p/q"], ...]} } } } }
Json game_to_json(const StochGame& g);
StochGame game_from_json(const Json& j);

// { "kind": "eigenpair" | "strict_super" | "sub", "c": ["p/q", ...],
//   "rho": "p/q" (eigenpair only) }
Json certificate_to_json(const GameCertificate& cert);
GameCertificate certificate_from_json(const Json& j);

// ---- constraint systems ----------------------------------------------------
// { "n": int, "avg": [[i,j,k], ...], "min": [[i,j,k], ...],
//   "a": { "i,j": int } } with every ordered pair present.
Json csp_to_json(const CSPInstance& csp);
CSPInstance csp_from_json(const Json& j);

// ---- gadget documents ------------------------------------------------------
// Compiled instances ship the graph, the functions, the scale M, and a
// provenance object that explains every emitted id (which constraint an edge
// encodes, which role a function plays).
Json generalized_to_json(const GeneralizedInstance& gi);
Json completed_to_json(const CompletedInstance& ci);

// ---- documents -------------------------------------------------------------
Json load_json(const std::string& path);  // throws with the path in the message
std::string dump_json(const Json& j);     // 2-space indent, trailing newline

}  // namespace tropgraph
