#include "causalwb/graph_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <tuple>

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

struct Connector {
    std::string_view token;
    Mark left;
    Mark right;
};

constexpr Connector kConnectors[] = {
    {"-->", Mark::Tail, Mark::Arrow},   {"---", Mark::Tail, Mark::Tail},
    {"<->", Mark::Arrow, Mark::Arrow},  {"o->", Mark::Circle, Mark::Arrow},
    {"o-o", Mark::Circle, Mark::Circle},
};

struct ParsedEdge {
    std::string left;
    std::string right;
    Mark at_left;
    Mark at_right;
    std::size_t line;
};

}  // namespace

MixedGraph parse_graph(std::string_view text) {
    std::vector<std::string> order;
    std::vector<ParsedEdge> parsed;
    auto declare = [&](const std::string& label) {
        if (std::find(order.begin(), order.end(), label) == order.end()) {
            order.push_back(label);
        }
    };

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto end = text.find('\n', pos);
        const auto raw = text.substr(pos, end == std::string_view::npos ? text.size() - pos : end - pos);
        pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
        ++line_no;

        const auto line = trim(raw);
        if (line.empty() || line.front() == '#') {
            continue;
        }
        if (line.starts_with("nodes:")) {
            std::string_view rest = line.substr(6);
            while (!rest.empty()) {
                const auto comma = rest.find(',');
                const auto item = trim(rest.substr(0, comma));
                if (item.empty()) {
                    throw ParseError(line_no, "empty node name in header");
                }
                declare(std::string(item));
                if (comma == std::string_view::npos) {
                    break;
                }
                rest = rest.substr(comma + 1);
            }
            continue;
        }

        std::istringstream in{std::string(line)};
        std::string left, conn, right, extra;
        if (!(in >> left >> conn >> right) || (in >> extra)) {
            throw ParseError(line_no, "expected '<node> <connector> <node>'");
        }
        const Connector* match = nullptr;
        for (const auto& c : kConnectors) {
            if (c.token == conn) {
                match = &c;
            }
        }
        if (match == nullptr) {
            throw ParseError(line_no, "unknown connector '" + conn + "'");
        }
        if (left == right) {
            throw ParseError(line_no, "self-loop on '" + left + "'");
        }
        declare(left);
        declare(right);
        parsed.push_back({left, right, match->left, match->right, line_no});
    }

    MixedGraph g(order);
    for (const auto& e : parsed) {
        const auto a = g.index_of(e.left);
        const auto b = g.index_of(e.right);
        if (g.adjacent(a, b)) {
            throw ParseError(e.line, "second edge between '" + e.left + "' and '" + e.right + "'");
        }
        g.add_edge(a, b, e.at_left, e.at_right);
    }
    return g;
}

MixedGraph read_graph_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::IoError, "cannot open graph file " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_graph(buf.str());
}

std::string format_edge(const MixedGraph& g, const Edge& e) {
    const auto& la = g.label(e.a);
    const auto& lb = g.label(e.b);
    for (const auto& c : kConnectors) {
        if (c.left == e.mark_at_a && c.right == e.mark_at_b) {
            return la + " " + std::string(c.token) + " " + lb;
        }
        if (c.left == e.mark_at_b && c.right == e.mark_at_a) {
            return lb + " " + std::string(c.token) + " " + la;
        }
    }
    throw Error(ErrorCode::InvalidArgument, "edge between '" + la + "' and '" + lb + "' has no text form");
}

std::string format_graph(const MixedGraph& g, const std::vector<std::string>& comments) {
    std::string out = "nodes: ";
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (i > 0) {
            out += ',';
        }
        out += g.labels()[i];
    }
    out += '\n';
    for (const auto& e : g.edges()) {
        out += format_edge(g, e);
        out += '\n';
    }
    for (const auto& c : comments) {
        out += "# ";
        out += c;
        out += '\n';
    }
    return out;
}

void write_graph_file(const MixedGraph& g, const std::filesystem::path& path,
                      const std::vector<std::string>& comments) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorCode::IoError, "cannot write graph file " + path.string());
    }
    out << format_graph(g, comments);
}

}  // namespace causalwb
