#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "skytrav/engine.hpp"
#include "skytrav/instance.hpp"

namespace skytrav {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Structural parse of the JSON instance document (grammar in
// docs/instance_format.md). Unknown keys are rejected; numbers are decimal
// strings (or integers) parsed exactly. Model-level checks live in
// validate_instance.
Instance parse_instance_document(const std::string& text);

// Parse and validate; throws ValidationError when the model is broken.
Instance parse_instance(const std::string& text);

Instance load_instance_file(const std::string& path);

// Canonical re-serialization; parse(emit(x)) reproduces x.
std::string emit_instance(const Instance& instance);

enum class TraceFormat { Csv, Structured };

// Trace serialization. CSV columns, in order: step, sig_node, sig_context,
// cost_1..d, bin_1..d, skyline_size, frontier_size, covered_bins, solutions,
// certificate, cost_updates, dominance_comparisons, and h_star when the trace
// carries a floor annotation. LF line endings, unquoted fields.
void emit_trace(const SearchResult& result, const Instance& instance, std::ostream& out,
                TraceFormat format = TraceFormat::Csv);

std::string trace_to_string(const SearchResult& result, const Instance& instance,
                            TraceFormat format = TraceFormat::Csv);

}  // namespace skytrav
