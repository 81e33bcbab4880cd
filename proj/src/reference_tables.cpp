#include "capalloc/reference_tables.hpp"

#include <algorithm>
#include <cctype>
#include <string>

namespace capalloc {

std::string_view to_string(Method method) {
    switch (method) {
        case Method::Opt: return "opt";
        case Method::DN: return "dn";
        case Method::DN1S: return "dn1s";
        case Method::TH: return "th";
        case Method::TH1S: return "th1s";
    }
    return "?";
}

Method parse_method(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    for (Method m : kAllMethods)
        if (lower == to_string(m)) return m;
    throw InvalidInput("unknown method '" + std::string(name) + "'");
}

ProblemConfig ReferenceTable::config(const ReferenceRow& row) const {
    ProblemConfig c;
    c.K = K;
    c.M = M;
    c.A = row.A;
    c.lambda = 0.2 * row.A;
    c.ce = ce;
    c.co = co;
    c.load = row.load;
    return c;
}

bool is_long_cell(const ReferenceTable& table, const ReferenceRow& row) {
    return table.K >= 5 || row.A >= 5;
}

namespace {

constexpr auto EL = LoadPattern::Equal;
constexpr auto FL = LoadPattern::FrontLoaded;
constexpr auto BL = LoadPattern::BackLoaded;
constexpr auto AL = LoadPattern::Arbitrary;

std::vector<ReferenceTable> build() {
    std::vector<ReferenceTable> t;
    //                 Opt    DN    DN1S    TH  TH1S
    t.push_back({1, 1, 4, 5.0, 20.0,
                 {{EL, 1, {0.18, 0.26, 0.19, 0.19, 0.18}},
                  {EL, 2, {0.98, 1.38, 1.01, 1.01, 0.98}},
                  {EL, 3, {2.27, 2.97, 2.30, 2.30, 2.27}},
                  {FL, 1, {0.18, 0.21, 0.18, 0.18, 0.18}},
                  {FL, 2, {1.18, 1.33, 1.18, 1.18, 1.18}},
                  {FL, 3, {2.57, 2.95, 2.57, 2.57, 2.57}},
                  {BL, 1, {0.09, 0.21, 0.10, 0.10, 0.09}},
                  {BL, 2, {0.67, 1.33, 0.79, 0.79, 0.67}},
                  {BL, 3, {1.78, 2.95, 1.92, 1.92, 1.78}},
                  {AL, 1, {0.19, 0.26, 0.19, 0.19, 0.19}},
                  {AL, 2, {1.01, 1.37, 1.05, 1.05, 1.01}},
                  {AL, 3, {2.31, 2.97, 2.37, 2.37, 2.31}}}});
    t.push_back({2, 1, 4, 10.0, 20.0,
                 {{EL, 1, {0.21, 0.26, 0.21, 0.22, 0.21}},
                  {EL, 2, {1.13, 1.38, 1.20, 1.24, 1.13}},
                  {EL, 3, {2.55, 2.97, 2.63, 2.71, 2.55}},
                  {FL, 1, {0.19, 0.21, 0.19, 0.19, 0.19}},
                  {FL, 2, {1.23, 1.33, 1.24, 1.24, 1.23}},
                  {FL, 3, {2.77, 2.95, 2.78, 2.79, 2.77}},
                  {BL, 1, {0.13, 0.21, 0.14, 0.17, 0.13}},
                  {BL, 2, {0.95, 1.33, 1.12, 1.27, 0.95}},
                  {BL, 3, {2.32, 2.95, 2.53, 2.77, 2.32}},
                  {AL, 1, {0.21, 0.26, 0.23, 0.23, 0.21}},
                  {AL, 2, {1.15, 1.37, 1.24, 1.29, 1.15}},
                  {AL, 3, {2.59, 2.97, 2.71, 2.79, 2.59}}}});
    t.push_back({3, 5, 4, 10.0, 20.0,
                 {{EL, 1, {0.00, 0.00, 0.00, 0.09, 0.00}},
                  {EL, 2, {0.00, 0.00, 0.00, 0.04, 0.00}},
                  {EL, 3, {0.00, 0.00, 0.00, 0.01, 0.00}},
                  {FL, 1, {0.00, 0.00, 0.00, 0.02, 0.00}},
                  {FL, 2, {0.00, 0.00, 0.00, 0.01, 0.00}},
                  {FL, 3, {0.00, 0.00, 0.00, 0.00, 0.00}},
                  {BL, 1, {0.00, 0.00, 0.00, 0.15, 0.00}},
                  {BL, 2, {0.00, 0.00, 0.00, 0.09, 0.00}},
                  {BL, 3, {0.00, 0.00, 0.00, 0.04, 0.00}},
                  {AL, 1, {0.00, 0.00, 0.00, 0.08, 0.00}},
                  {AL, 2, {0.00, 0.00, 0.00, 0.04, 0.00}},
                  {AL, 3, {0.00, 0.00, 0.00, 0.01, 0.00}}}});
    t.push_back({4, 1, 3, 10.0, 20.0,
                 {{EL, 1, {0.20, 0.23, 0.20, 0.20, 0.20}},
                  {EL, 2, {1.16, 1.36, 1.19, 1.19, 1.16}},
                  {EL, 5, {6.81, 7.36, 6.86, 6.86, 6.81}},
                  {EL, 10, {22.09, 22.71, 22.20, 22.20, 22.09}},
                  {FL, 1, {0.16, 0.17, 0.16, 0.16, 0.16}},
                  {FL, 2, {1.23, 1.30, 1.23, 1.24, 1.23}},
                  {FL, 5, {7.16, 7.35, 7.17, 7.20, 7.16}},
                  {FL, 10, {22.23, 22.71, 22.23, 22.23, 22.23}},
                  {BL, 1, {0.12, 0.17, 0.12, 0.12, 0.12}},
                  {BL, 2, {0.95, 1.30, 1.05, 1.05, 0.95}},
                  {BL, 5, {6.46, 7.35, 6.59, 6.59, 6.46}},
                  {BL, 10, {21.94, 22.71, 21.96, 21.98, 21.94}},
                  {AL, 1, {0.20, 0.22, 0.20, 0.20, 0.20}},
                  {AL, 2, {1.19, 1.35, 1.24, 1.24, 1.19}},
                  {AL, 5, {6.90, 7.36, 6.98, 6.98, 6.90}},
                  {AL, 10, {22.11, 22.71, 22.12, 22.12, 22.11}}}});
    t.push_back({5, 1, 5, 5.0, 20.0,
                 {{EL, 1, {0.18, 0.28, 0.19, 0.19, 0.18}},
                  {EL, 2, {0.92, 1.39, 1.00, 1.00, 0.92}},
                  {FL, 1, {0.19, 0.24, 0.20, 0.20, 0.19}},
                  {FL, 2, {1.14, 1.36, 1.15, 1.15, 1.14}},
                  {BL, 1, {0.09, 0.24, 0.14, 0.14, 0.09}},
                  {BL, 2, {0.64, 1.36, 0.89, 0.89, 0.64}},
                  {AL, 1, {0.18, 0.28, 0.20, 0.20, 0.18}},
                  {AL, 2, {0.93, 1.39, 1.04, 1.04, 0.93}}}});
    t.push_back({6, 1, 5, 10.0, 20.0,
                 {{EL, 1, {0.22, 0.28, 0.22, 0.26, 0.22}},
                  {EL, 2, {1.11, 1.39, 1.21, 1.32, 1.11}},
                  {FL, 1, {0.21, 0.24, 0.21, 0.21, 0.21}},
                  {FL, 2, {1.22, 1.36, 1.24, 1.24, 1.22}},
                  {BL, 1, {0.15, 0.24, 0.20, 0.25, 0.15}},
                  {BL, 2, {0.96, 1.36, 1.15, 1.57, 0.96}},
                  {AL, 1, {0.22, 0.28, 0.25, 0.27, 0.22}},
                  {AL, 2, {1.12, 1.39, 1.24, 1.40, 1.12}}}});
    return t;
}

}  // namespace

const std::vector<ReferenceTable>& reference_tables() {
    static const std::vector<ReferenceTable> tables = build();
    return tables;
}

const ReferenceTable& reference_table(int id) {
    if (id < 1 || id > 6) throw InvalidInput("table id must be in 1..6");
    return reference_tables()[static_cast<std::size_t>(id - 1)];
}

}  // namespace capalloc
