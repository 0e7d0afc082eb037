#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace pmres {

// Process exit codes; library errors carry the code the CLI maps them to.
enum class ExitCode : int {
    ok = 0,
    schema = 2,
    validation = 3,
    cap = 4,
    internal = 5,
};

class Error : public std::runtime_error {
public:
    Error(std::string kind, ExitCode code, const std::string& what)
        : std::runtime_error(kind + ": " + what), kind_(std::move(kind)), code_(code) {}

    const std::string& kind() const { return kind_; }
    ExitCode code() const { return code_; }

private:
    std::string kind_;
    ExitCode code_;
};

namespace err {

inline Error schema(const std::string& w) { return Error("SchemaError", ExitCode::schema, w); }

inline Error ridge_degree_violation(const std::string& w) {
    return Error("RidgeDegreeViolation", ExitCode::validation, w);
}
inline Error not_strongly_connected(const std::string& w) {
    return Error("NotStronglyConnected", ExitCode::validation, w);
}
inline Error non_orientable(const std::string& w) { return Error("NonOrientable", ExitCode::validation, w); }
inline Error face_not_present(const std::string& w) { return Error("FaceNotPresent", ExitCode::validation, w); }
inline Error not_nested(const std::string& w) { return Error("NotNested", ExitCode::validation, w); }
inline Error not_proper_coloring(const std::string& w) {
    return Error("NotProperColoring", ExitCode::validation, w);
}
inline Error wrong_color_count(const std::string& w) { return Error("WrongColorCount", ExitCode::validation, w); }
inline Error bad_labeling(const std::string& w) { return Error("BadLabeling", ExitCode::validation, w); }
inline Error not_bipartite(const std::string& w) { return Error("NotBipartite", ExitCode::validation, w); }
inline Error unbalanced_colors(const std::string& w) { return Error("UnbalancedColors", ExitCode::validation, w); }
inline Error no_such_face(const std::string& w) { return Error("NoSuchFace", ExitCode::internal, w); }
inline Error not_unique(const std::string& w) { return Error("NotUnique", ExitCode::internal, w); }
inline Error cap_exceeded(const std::string& w) { return Error("CapExceeded", ExitCode::cap, w); }
inline Error pairing_broken(const std::string& w) { return Error("PairingBroken", ExitCode::internal, w); }
inline Error non_orientable_quotient(const std::string& w) {
    return Error("NonOrientableQuotient", ExitCode::internal, w);
}
inline Error inconsistent_degree(const std::string& w) {
    return Error("InconsistentDegree", ExitCode::internal, w);
}
inline Error pattern_mismatch(const std::string& w) { return Error("PatternMismatch", ExitCode::validation, w); }
inline Error internal(const std::string& w) { return Error("InternalInvariant", ExitCode::internal, w); }

}  // namespace err

}  // namespace pmres
