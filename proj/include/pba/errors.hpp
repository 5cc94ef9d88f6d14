#pragma once

#include <stdexcept>
#include <string>

namespace pba {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct ArityMismatch : Error { using Error::Error; };
struct IndexOutOfRange : Error { using Error::Error; };
struct NotAMeasure : Error { using Error::Error; };
struct MissingValue : Error { using Error::Error; };
struct EmptyKeptSet : Error { using Error::Error; };
struct LimitExceeded : Error { using Error::Error; };
struct NodeNotInPba : Error { using Error::Error; };
struct KsPropertyRequired : Error { using Error::Error; };
struct DimMismatch : Error { using Error::Error; };
struct NotAProjection : Error { using Error::Error; };
struct InternalInconsistency : Error { using Error::Error; };
struct NotAGeneratingSet : Error { using Error::Error; };
struct PropertyGViolated : Error { using Error::Error; };
struct IncompleteStates : Error { using Error::Error; };
struct InvalidThreeSpec : Error { using Error::Error; };
struct ChiEtaOutOfBox : Error { using Error::Error; };
struct OverlapMismatch : Error { using Error::Error; };
struct BlocksOverlap : Error { using Error::Error; };
struct NotAForest : Error { using Error::Error; };
struct NoRunningIntersectionOrder : Error { using Error::Error; };
struct WrongTopology : Error { using Error::Error; };
struct InfeasibleBase : Error { using Error::Error; };
struct ValueOutOfBand : Error { using Error::Error; };
struct NotPartialMeasure : Error { using Error::Error; };
struct NotExtensible : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };
struct ValidationError : Error { using Error::Error; };
struct MethodInapplicable : Error { using Error::Error; };

}  // namespace pba
