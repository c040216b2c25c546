#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "shadowlab/density_rn.hpp"
#include "shadowlab/factor_map.hpp"
#include "shadowlab/measure_core.hpp"
#include "shadowlab/shadowing_engine.hpp"
#include "shadowlab/shift_ops.hpp"

namespace shadowlab {

// Ordered JSON document builder. Reports must be byte-identical across
// runs, so doubles print at 17 significant digits and object keys keep
// insertion order; parsing stays with the vendored reader.
class JsonValue {
public:
    static JsonValue object();
    static JsonValue array();
    static JsonValue str(std::string v);
    static JsonValue num(double v);
    static JsonValue integer(std::int64_t v);
    static JsonValue uinteger(std::uint64_t v);
    static JsonValue boolean(bool v);

    JsonValue& set(const std::string& key, JsonValue v); // object member, ordered
    JsonValue& push(JsonValue v);                        // array element
    std::string dump() const;                            // 2-space indent, trailing newline

private:
    enum class Tag { Str, Num, Int, UInt, Bool, Arr, Obj };
    Tag tag_ = Tag::Obj;
    std::string s_;
    double d_ = 0.0;
    std::int64_t i_ = 0;
    std::uint64_t u_ = 0;
    bool b_ = false;
    std::vector<JsonValue> arr_;
    std::vector<std::pair<std::string, JsonValue>> obj_;

    bool scalar() const { return tag_ != Tag::Arr && tag_ != Tag::Obj; }
    void write(std::string& out, int depth) const;
};

std::string format_double(double v);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// CSV formats. Measures: header "k,nu", consecutive ascending k.
void write_measure_csv(const std::string& path, const MeasureSequence& seq);
MeasureSequence read_measure_csv(const std::string& path);

// Weights: header "k,w", consecutive ascending k.
void write_weight_csv(const std::string& path, const WeightSequence& seq);
WeightSequence read_weight_csv(const std::string& path);

// Vectors: header "n,x", ascending n; gaps read as zeros.
void write_vector_csv(const std::string& path, const LpVector& x);
LpVector read_vector_csv(const std::string& path, double p);

// Pseudotrajectory archive: a dense "n,coord,value" CSV plus a JSON sidecar
// carrying delta, p, the time window, and the noise seed.
void write_pseudo_archive(const std::string& csv_path, const std::string& json_path,
                          const PseudoTrajectory& pt);
PseudoTrajectory read_pseudo_archive(const std::string& csv_path,
                                     const std::string& json_path);

// Report fragments shared by the command-line tool and the tests.
JsonValue rate_estimate_json(const RateEstimate& est);
JsonValue classification_json(const Classification& c);
JsonValue witness_json(const Witness& w);
JsonValue distortion_json(const DistortionReport& rep);
JsonValue ratio_bound_json(const RatioBoundReport& rep);
JsonValue shadow_report_json(const ShadowReport& rep);
JsonValue commuting_json(const CommutingReport& rep);
JsonValue membership_json(const MembershipReport& rep, UClass cls, double K, double t);

} // namespace shadowlab
