#pragma once

#include <array>
#include <vector>

#include "capalloc/model.hpp"

namespace capalloc {

/// Method order used in every results table and CSV.
enum class Method { Opt, DN, DN1S, TH, TH1S };
inline constexpr std::array<Method, 5> kAllMethods = {Method::Opt, Method::DN, Method::DN1S,
                                                      Method::TH, Method::TH1S};
std::string_view to_string(Method method);
/// Accepts opt/dn/dn1s/th/th1s (case-insensitive).
Method parse_method(std::string_view name);

/// Published long-run average costs for one (load, A) row, two decimals.
struct ReferenceRow {
    LoadPattern load;
    int A;
    std::array<double, 5> cost;  ///< in kAllMethods order

    double value(Method m) const { return cost[static_cast<std::size_t>(m)]; }
};

struct ReferenceTable {
    int id;
    int M;
    int K;
    double ce;
    double co;
    std::vector<ReferenceRow> rows;

    /// Instance of a row with lambda = 0.2 A.
    ProblemConfig config(const ReferenceRow& row) const;
};

/// Cells that take noticeably longer than the rest (Table 4 with A >= 5 and the
/// K = 5 tables). `--fast` skips them.
bool is_long_cell(const ReferenceTable& table, const ReferenceRow& row);

const std::vector<ReferenceTable>& reference_tables();
/// Throws InvalidInput for ids outside 1..6.
const ReferenceTable& reference_table(int id);

}  // namespace capalloc
