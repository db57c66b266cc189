#pragma once

#include <string>

#include <json.hpp>

#include "squashkit/finder.hpp"
#include "squashkit/fock.hpp"
#include "squashkit/group.hpp"
#include "squashkit/linalg.hpp"
#include "squashkit/nogo.hpp"
#include "squashkit/povm.hpp"
#include "squashkit/squash.hpp"

namespace squashkit::io {

using Json = nlohmann::ordered_json;

// Square: {"dim": d, "entries": [[re, im], ...]}; rectangular matrices carry
// "rows" and "cols" instead of "dim". Entries are row-major.
Json to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j);

Json to_json(const Vector& v);
Vector vector_from_json(const Json& j);

// {"dim": d, "elements": {"z0": ..., "z1": ..., "x0": ..., "x1": ...}}
Json to_json(const Bb84Povm& p);
Bb84Povm povm_from_json(const Json& j);

// {"order": n, "cayley": [[...]], "identity": e}
Json to_json(const FiniteGroup& g);
FiniteGroup group_from_json(const Json& j);

// One entry per element: images of ["z0", "x0", "z1", "x1"] as label names.
Json to_json(const LabelAction& a);
LabelAction action_from_json(const FiniteGroup& g, const Json& j);

// {"in_dim": d, "kraus": [...]}
Json to_json(const SquashMap& f);
SquashMap squash_from_json(const Json& j);

Json to_json(const DetectorModel& model);
Json to_json(const FeasibilityReport& report);
Json to_json(const AttackResult& result);
Json to_json(const VerificationReport& report);
Json to_json(const SymmetryReport& report);

// Throws ParseError on I/O or syntax problems.
Json read_json_file(const std::string& path);
// Writes to a sibling temporary file and renames it into place.
void write_json_file(const std::string& path, const Json& j);
std::string dump(const Json& j);

}  // namespace squashkit::io
