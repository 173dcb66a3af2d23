#ifndef CAUSALWB_DATASET_HPP
#define CAUSALWB_DATASET_HPP

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace causalwb {

inline constexpr int kMissing = -1;
inline constexpr std::string_view kMissingToken = "?";

struct ContinuousColumn {
    std::string name;
    std::vector<std::optional<double>> values;
};

/// Ordinal-coded column: values index into `states`, kMissing marks a gap.
struct CategoricalColumn {
    std::string name;
    std::vector<std::string> states;
    std::vector<int> values;

    std::size_t arity() const noexcept { return states.size(); }
    std::size_t missing_count() const;
};

using Column = std::variant<ContinuousColumn, CategoricalColumn>;

const std::string& column_name(const Column& c);
std::size_t column_length(const Column& c);

/// Raw table as loaded from disk; may mix continuous and categorical columns.
struct Table {
    std::vector<Column> columns;

    std::size_t rows() const { return columns.empty() ? 0 : column_length(columns.front()); }
    bool all_categorical() const;
};

/// Column-major table of categorical columns of equal length.
class CategoricalDataset {
public:
    CategoricalDataset() = default;
    /// Validates equal lengths, non-empty state lists and in-range codes.
    explicit CategoricalDataset(std::vector<CategoricalColumn> columns);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return columns_.size(); }
    const CategoricalColumn& column(std::size_t c) const { return columns_.at(c); }
    const std::vector<CategoricalColumn>& columns() const noexcept { return columns_; }
    int value(std::size_t row, std::size_t col) const { return columns_[col].values[row]; }
    std::size_t arity(std::size_t col) const { return columns_[col].arity(); }

    std::vector<std::string> names() const;
    std::vector<std::size_t> arities() const;
    std::optional<std::size_t> find(std::string_view name) const;
    bool complete() const;

    CategoricalDataset select_rows(std::span<const std::size_t> rows) const;
    /// Columns reordered to `names`; throws NodeUniverseMismatch when a name is unknown.
    CategoricalDataset select_columns(const std::vector<std::string>& names) const;

    friend bool operator==(const CategoricalDataset& x, const CategoricalDataset& y);

private:
    std::vector<CategoricalColumn> columns_;
    std::size_t rows_ = 0;
};

bool operator==(const CategoricalColumn& x, const CategoricalColumn& y);

CategoricalDataset to_categorical(const Table& t);
Table to_table(const CategoricalDataset& d);

// --- files -----------------------------------------------------------------

enum class ColumnKind { Continuous, Categorical };

struct ColumnSchema {
    std::string name;
    ColumnKind kind = ColumnKind::Categorical;
    std::vector<std::string> states;
};

using Schema = std::vector<ColumnSchema>;

// Schema file: one column per line, `<name> continuous` or
// `<name> categorical <state1>,<state2>,...`; '#' starts a comment line.
Schema parse_schema(std::string_view text);
Schema read_schema_file(const std::filesystem::path& path);
std::string format_schema(const Schema& schema);
void write_schema_file(const Schema& schema, const std::filesystem::path& path);
Schema schema_of(const Table& t);

/// Delimited text with a header row; cells equal to "?" are missing.
Table parse_table(std::string_view text, const Schema& schema, char delimiter = ',');
Table read_table_file(const std::filesystem::path& path, const Schema& schema, char delimiter = ',');
std::string format_table(const Table& t, char delimiter = ',');
void write_table_file(const Table& t, const std::filesystem::path& path, char delimiter = ',');

/// Load a fully categorical dataset (data + schema sidecar).
CategoricalDataset read_categorical(const std::filesystem::path& data, const std::filesystem::path& schema,
                                    char delimiter = ',');

}  // namespace causalwb

#endif  // CAUSALWB_DATASET_HPP
