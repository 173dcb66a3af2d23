#include "causalwb/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "causalwb/errors.hpp"

namespace causalwb {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char delim) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(delim, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) {
            break;
        }
        start = pos + 1;
    }
    return out;
}

std::vector<std::string_view> lines_of(std::string_view text) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const auto end = text.find('\n', pos);
        out.push_back(text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos));
        if (end == std::string_view::npos) {
            break;
        }
        pos = end + 1;
    }
    return out;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::IoError, "cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void spill(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorCode::IoError, "cannot write " + path.string());
    }
    out << text;
}

std::string format_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, end);
}

}  // namespace

std::size_t CategoricalColumn::missing_count() const {
    return static_cast<std::size_t>(std::count(values.begin(), values.end(), kMissing));
}

bool operator==(const CategoricalColumn& x, const CategoricalColumn& y) {
    return x.name == y.name && x.states == y.states && x.values == y.values;
}

const std::string& column_name(const Column& c) {
    return std::visit([](const auto& col) -> const std::string& { return col.name; }, c);
}

std::size_t column_length(const Column& c) {
    return std::visit([](const auto& col) { return col.values.size(); }, c);
}

bool Table::all_categorical() const {
    return std::all_of(columns.begin(), columns.end(),
                       [](const Column& c) { return std::holds_alternative<CategoricalColumn>(c); });
}

CategoricalDataset::CategoricalDataset(std::vector<CategoricalColumn> columns) : columns_(std::move(columns)) {
    rows_ = columns_.empty() ? 0 : columns_.front().values.size();
    for (const auto& c : columns_) {
        if (c.values.size() != rows_) {
            throw Error(ErrorCode::InvalidArgument, "column '" + c.name + "' has a different length");
        }
        if (c.states.empty()) {
            throw Error(ErrorCode::InvalidArgument, "column '" + c.name + "' has no states");
        }
        for (int v : c.values) {
            if (v != kMissing && (v < 0 || static_cast<std::size_t>(v) >= c.states.size())) {
                throw Error(ErrorCode::InvalidArgument, "column '" + c.name + "' has an out-of-range code");
            }
        }
    }
}

std::vector<std::string> CategoricalDataset::names() const {
    std::vector<std::string> out;
    out.reserve(columns_.size());
    for (const auto& c : columns_) {
        out.push_back(c.name);
    }
    return out;
}

std::vector<std::size_t> CategoricalDataset::arities() const {
    std::vector<std::size_t> out;
    out.reserve(columns_.size());
    for (const auto& c : columns_) {
        out.push_back(c.arity());
    }
    return out;
}

std::optional<std::size_t> CategoricalDataset::find(std::string_view name) const {
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        if (columns_[i].name == name) {
            return i;
        }
    }
    return std::nullopt;
}

bool CategoricalDataset::complete() const {
    return std::all_of(columns_.begin(), columns_.end(), [](const auto& c) { return c.missing_count() == 0; });
}

CategoricalDataset CategoricalDataset::select_rows(std::span<const std::size_t> rows) const {
    std::vector<CategoricalColumn> out;
    out.reserve(columns_.size());
    for (const auto& c : columns_) {
        CategoricalColumn sub{c.name, c.states, {}};
        sub.values.reserve(rows.size());
        for (auto r : rows) {
            sub.values.push_back(c.values.at(r));
        }
        out.push_back(std::move(sub));
    }
    return CategoricalDataset(std::move(out));
}

CategoricalDataset CategoricalDataset::select_columns(const std::vector<std::string>& names) const {
    std::vector<CategoricalColumn> out;
    out.reserve(names.size());
    for (const auto& n : names) {
        const auto idx = find(n);
        if (!idx) {
            throw Error(ErrorCode::NodeUniverseMismatch, "dataset has no column '" + n + "'");
        }
        out.push_back(columns_[*idx]);
    }
    return CategoricalDataset(std::move(out));
}

bool operator==(const CategoricalDataset& x, const CategoricalDataset& y) {
    return x.rows_ == y.rows_ && x.columns_ == y.columns_;
}

CategoricalDataset to_categorical(const Table& t) {
    std::vector<CategoricalColumn> cols;
    for (const auto& c : t.columns) {
        if (const auto* cat = std::get_if<CategoricalColumn>(&c)) {
            cols.push_back(*cat);
        } else {
            throw Error(ErrorCode::InvalidArgument,
                        "column '" + column_name(c) + "' is continuous; discretize it first");
        }
    }
    return CategoricalDataset(std::move(cols));
}

Table to_table(const CategoricalDataset& d) {
    Table t;
    for (const auto& c : d.columns()) {
        t.columns.emplace_back(c);
    }
    return t;
}

// --- schema ----------------------------------------------------------------

Schema parse_schema(std::string_view text) {
    Schema out;
    std::size_t line_no = 0;
    for (auto raw : lines_of(text)) {
        ++line_no;
        const auto line = trim(raw);
        if (line.empty() || line.front() == '#') {
            continue;
        }
        std::istringstream in{std::string(line)};
        std::string name, kind, states, extra;
        in >> name >> kind;
        in >> states;
        if (in >> extra) {
            throw ParseError(line_no, "trailing text in schema line");
        }
        ColumnSchema col{name, ColumnKind::Categorical, {}};
        if (kind == "continuous") {
            col.kind = ColumnKind::Continuous;
            if (!states.empty()) {
                throw ParseError(line_no, "continuous column '" + name + "' cannot list states");
            }
        } else if (kind == "categorical") {
            if (states.empty()) {
                throw ParseError(line_no, "categorical column '" + name + "' needs states");
            }
            for (auto s : split(states, ',')) {
                if (s.empty()) {
                    throw ParseError(line_no, "empty state label");
                }
                if (std::find(col.states.begin(), col.states.end(), s) != col.states.end()) {
                    throw ParseError(line_no, "duplicate state '" + std::string(s) + "'");
                }
                col.states.emplace_back(s);
            }
        } else {
            throw ParseError(line_no, "unknown column kind '" + kind + "'");
        }
        for (const auto& prev : out) {
            if (prev.name == name) {
                throw ParseError(line_no, "duplicate column '" + name + "'");
            }
        }
        out.push_back(std::move(col));
    }
    return out;
}

Schema read_schema_file(const std::filesystem::path& path) { return parse_schema(slurp(path)); }

std::string format_schema(const Schema& schema) {
    std::string out;
    for (const auto& c : schema) {
        out += c.name;
        if (c.kind == ColumnKind::Continuous) {
            out += " continuous\n";
            continue;
        }
        out += " categorical ";
        for (std::size_t i = 0; i < c.states.size(); ++i) {
            out += (i ? "," : "") + c.states[i];
        }
        out += '\n';
    }
    return out;
}

void write_schema_file(const Schema& schema, const std::filesystem::path& path) {
    spill(path, format_schema(schema));
}

Schema schema_of(const Table& t) {
    Schema out;
    for (const auto& c : t.columns) {
        if (const auto* cat = std::get_if<CategoricalColumn>(&c)) {
            out.push_back({cat->name, ColumnKind::Categorical, cat->states});
        } else {
            out.push_back({column_name(c), ColumnKind::Continuous, {}});
        }
    }
    return out;
}

// --- data ------------------------------------------------------------------

Table parse_table(std::string_view text, const Schema& schema, char delimiter) {
    const auto lines = lines_of(text);
    std::size_t header_at = 0;
    while (header_at < lines.size() && trim(lines[header_at]).empty()) {
        ++header_at;
    }
    if (header_at == lines.size()) {
        throw ParseError(1, "missing header row");
    }
    const auto header = split(trim(lines[header_at]), delimiter);

    // Column i of the file -> schema entry.
    std::vector<const ColumnSchema*> layout;
    for (auto h : header) {
        auto it = std::find_if(schema.begin(), schema.end(), [&](const auto& c) { return c.name == h; });
        if (it == schema.end()) {
            throw ParseError(header_at + 1, "column '" + std::string(h) + "' missing from schema");
        }
        layout.push_back(&*it);
    }
    if (layout.size() != schema.size()) {
        throw ParseError(header_at + 1, "header does not cover every schema column");
    }

    Table t;
    for (const auto* c : layout) {
        if (c->kind == ColumnKind::Continuous) {
            t.columns.emplace_back(ContinuousColumn{c->name, {}});
        } else {
            t.columns.emplace_back(CategoricalColumn{c->name, c->states, {}});
        }
    }

    for (std::size_t li = header_at + 1; li < lines.size(); ++li) {
        const auto line = trim(lines[li]);
        if (line.empty()) {
            continue;
        }
        const auto cells = split(line, delimiter);
        if (cells.size() != layout.size()) {
            throw ParseError(li + 1, "expected " + std::to_string(layout.size()) + " cells, found " +
                                         std::to_string(cells.size()));
        }
        for (std::size_t i = 0; i < cells.size(); ++i) {
            const auto cell = cells[i];
            const bool missing = cell == kMissingToken;
            if (auto* cont = std::get_if<ContinuousColumn>(&t.columns[i])) {
                if (missing) {
                    cont->values.emplace_back(std::nullopt);
                    continue;
                }
                double v = 0.0;
                auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
                if (ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(v)) {
                    throw ParseError(li + 1, "bad number '" + std::string(cell) + "' in column '" +
                                                 cont->name + "'");
                }
                cont->values.emplace_back(v);
            } else {
                auto& cat = std::get<CategoricalColumn>(t.columns[i]);
                if (missing) {
                    cat.values.push_back(kMissing);
                    continue;
                }
                auto it = std::find(cat.states.begin(), cat.states.end(), cell);
                if (it == cat.states.end()) {
                    throw ParseError(li + 1, "unknown state '" + std::string(cell) + "' in column '" +
                                                 cat.name + "'");
                }
                cat.values.push_back(static_cast<int>(it - cat.states.begin()));
            }
        }
    }
    return t;
}

Table read_table_file(const std::filesystem::path& path, const Schema& schema, char delimiter) {
    return parse_table(slurp(path), schema, delimiter);
}

std::string format_table(const Table& t, char delimiter) {
    std::string out;
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        if (i > 0) {
            out += delimiter;
        }
        out += column_name(t.columns[i]);
    }
    out += '\n';
    for (std::size_t r = 0; r < t.rows(); ++r) {
        for (std::size_t i = 0; i < t.columns.size(); ++i) {
            if (i > 0) {
                out += delimiter;
            }
            if (const auto* cont = std::get_if<ContinuousColumn>(&t.columns[i])) {
                const auto& v = cont->values[r];
                out += v ? format_double(*v) : std::string(kMissingToken);
            } else {
                const auto& cat = std::get<CategoricalColumn>(t.columns[i]);
                const int v = cat.values[r];
                out += v == kMissing ? std::string(kMissingToken) : cat.states[static_cast<std::size_t>(v)];
            }
        }
        out += '\n';
    }
    return out;
}

void write_table_file(const Table& t, const std::filesystem::path& path, char delimiter) {
    spill(path, format_table(t, delimiter));
}

CategoricalDataset read_categorical(const std::filesystem::path& data, const std::filesystem::path& schema,
                                    char delimiter) {
    return to_categorical(read_table_file(data, read_schema_file(schema), delimiter));
}

}  // namespace causalwb
