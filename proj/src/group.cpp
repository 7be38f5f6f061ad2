#include "hsp/group.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

#include "hsp/errors.hpp"

namespace hsp {

std::shared_ptr<const FiniteGroup> FiniteGroup::from_cayley(
    std::vector<std::vector<int>> table) {
    const int n = static_cast<int>(table.size());
    if (n == 0) throw NotAGroup("empty table");
    if (n > kMaxOrder)
        throw UnsupportedGroup("order " + std::to_string(n) + " exceeds cap " +
                               std::to_string(kMaxOrder));
    for (const auto& row : table) {
        if (static_cast<int>(row.size()) != n)
            throw NotAGroup("table is not square");
        for (int x : row)
            if (x < 0 || x >= n) throw NotAGroup("entry out of range");
    }

    // Latin square: every row and column a permutation.
    for (int a = 0; a < n; ++a) {
        std::vector<char> row_seen(n, 0), col_seen(n, 0);
        for (int b = 0; b < n; ++b) {
            if (row_seen[table[a][b]]++)
                throw NotAGroup("row " + std::to_string(a) +
                                " is not a permutation");
            if (col_seen[table[b][a]]++)
                throw NotAGroup("column " + std::to_string(a) +
                                " is not a permutation");
        }
    }

    int identity = -1;
    for (int e = 0; e < n && identity < 0; ++e) {
        bool ok = true;
        for (int x = 0; x < n && ok; ++x)
            ok = table[e][x] == x && table[x][e] == x;
        if (ok) identity = e;
    }
    if (identity < 0) throw NotAGroup("no identity element");

    std::vector<int> inverse(n, -1);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b)
            if (table[a][b] == identity) {
                inverse[a] = b;
                break;
            }
        if (inverse[a] < 0 || table[inverse[a]][a] != identity)
            throw NotAGroup("element " + std::to_string(a) +
                            " has no two-sided inverse");
    }

    // Exhaustive O(n^3) associativity check.
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                if (table[table[a][b]][c] != table[a][table[b][c]])
                    throw NotAGroup("associativity fails at (" +
                                    std::to_string(a) + "," +
                                    std::to_string(b) + "," +
                                    std::to_string(c) + ")");

    auto g = std::shared_ptr<FiniteGroup>(new FiniteGroup());
    g->n_ = n;
    g->identity_ = identity;
    g->cayley_ = std::move(table);
    g->inverse_ = std::move(inverse);
    return g;
}

Subgroup::Subgroup(GroupPtr parent, std::vector<int> members)
    : parent_(std::move(parent)), members_(std::move(members)) {
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()),
                   members_.end());
    const int n = parent_->order();
    mask_.assign(n, 0);
    for (int m : members_) {
        if (m < 0 || m >= n) throw NotAGroup("subgroup member out of range");
        mask_[m] = 1;
    }
    if (!contains(parent_->identity()))
        throw NotAGroup("subgroup missing identity");
    for (int a : members_) {
        if (!contains(parent_->inv(a)))
            throw NotAGroup("subgroup not closed under inverse");
        for (int b : members_)
            if (!contains(parent_->mul(a, b)))
                throw NotAGroup("subgroup not closed under product");
    }
    if (n % size() != 0)
        throw NotAGroup("subgroup size does not divide group order");
}

bool Subgroup::subset_of(const Subgroup& other) const {
    for (int m : members_)
        if (!other.contains(m)) return false;
    return true;
}

Subgroup cyclic_subgroup(const GroupPtr& g, int elem) {
    if (elem < 0 || elem >= g->order())
        throw UnsupportedGroup("element index out of range");
    std::vector<int> members{g->identity()};
    int x = elem;
    while (x != g->identity()) {
        members.push_back(x);
        x = g->mul(x, elem);
    }
    return Subgroup(g, std::move(members));
}

Subgroup subgroup_closure(const GroupPtr& g, const std::vector<int>& gens) {
    std::vector<char> seen(g->order(), 0);
    std::vector<int> frontier{g->identity()};
    seen[g->identity()] = 1;
    std::vector<int> members{g->identity()};
    while (!frontier.empty()) {
        std::vector<int> next;
        for (int a : frontier) {
            for (int h : gens) {
                if (h < 0 || h >= g->order())
                    throw UnsupportedGroup("generator index out of range");
                for (int p : {g->mul(a, h), g->mul(a, g->inv(h))}) {
                    if (!seen[p]) {
                        seen[p] = 1;
                        members.push_back(p);
                        next.push_back(p);
                    }
                }
            }
        }
        frontier = std::move(next);
    }
    return Subgroup(g, std::move(members));
}

CosetPartition left_cosets(const Subgroup& k) {
    const GroupPtr& g = k.parent();
    const int n = g->order();
    CosetPartition part{k, std::vector<int>(n, -1), {}, {}};
    for (int a = 0; a < n; ++a) {
        if (part.coset_of[a] >= 0) continue;
        const int id = part.coset_count();
        std::vector<int> coset;
        for (int h : k.members()) {
            int x = g->mul(a, h);
            part.coset_of[x] = id;
            coset.push_back(x);
        }
        std::sort(coset.begin(), coset.end());
        part.representatives.push_back(coset.front());
        part.cosets.push_back(std::move(coset));
    }
    return part;
}

std::vector<CyclicClass> distinct_cyclic_subgroups(const GroupPtr& g) {
    std::vector<CyclicClass> classes;
    for (int elem = 0; elem < g->order(); ++elem) {
        Subgroup s = cyclic_subgroup(g, elem);
        auto it = std::find_if(classes.begin(), classes.end(),
                               [&](const CyclicClass& c) {
                                   return c.subgroup == s;
                               });
        if (it == classes.end())
            classes.push_back({std::move(s), {elem}});
        else
            it->generators.push_back(elem);
    }
    std::sort(classes.begin(), classes.end(),
              [](const CyclicClass& a, const CyclicClass& b) {
                  if (a.subgroup.size() != b.subgroup.size())
                      return a.subgroup.size() < b.subgroup.size();
                  return a.generators.front() < b.generators.front();
              });
    return classes;
}

std::vector<Subgroup> enumerate_subgroups(const GroupPtr& g) {
    if (g->order() > 24)
        throw VerificationScaleExceeded(
            "subgroup enumeration capped at order 24, got " +
            std::to_string(g->order()));

    // Fixed-point iteration: close the set of known subgroups under
    // pairwise union-closure, seeded with the cyclic subgroups.
    std::set<std::vector<int>> known;
    for (const auto& c : distinct_cyclic_subgroups(g))
        known.insert(c.subgroup.members());

    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<std::vector<int>> snapshot(known.begin(), known.end());
        for (size_t i = 0; i < snapshot.size(); ++i) {
            for (size_t j = i + 1; j < snapshot.size(); ++j) {
                std::vector<int> gens = snapshot[i];
                gens.insert(gens.end(), snapshot[j].begin(), snapshot[j].end());
                Subgroup u = subgroup_closure(g, gens);
                if (known.insert(u.members()).second) grew = true;
            }
        }
    }

    std::vector<Subgroup> out;
    for (const auto& members : known) out.emplace_back(g, members);
    std::sort(out.begin(), out.end(), [](const Subgroup& a, const Subgroup& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a.members() < b.members();
    });
    return out;
}

namespace {

std::vector<std::vector<int>> cyclic_table(int n) {
    std::vector<std::vector<int>> t(n, std::vector<int>(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) t[a][b] = (a + b) % n;
    return t;
}

// Dihedral of order 2n: indices 0..n-1 are r^k, n..2n-1 are s*r^k.
std::vector<std::vector<int>> dihedral_table(int n) {
    const int order = 2 * n;
    auto mul = [n](int a, int b) {
        const bool fa = a >= n, fb = b >= n;
        const int ka = a % n, kb = b % n;
        if (!fa && !fb) return (ka + kb) % n;
        if (!fa) return n + (((kb - ka) % n) + n) % n;  // r^ka * s r^kb
        if (!fb) return n + (ka + kb) % n;              // s r^ka * r^kb
        return (((kb - ka) % n) + n) % n;               // s r^ka * s r^kb
    };
    std::vector<std::vector<int>> t(order, std::vector<int>(order));
    for (int a = 0; a < order; ++a)
        for (int b = 0; b < order; ++b) t[a][b] = mul(a, b);
    return t;
}

// S_n with elements in lexicographic permutation order; composition
// (p*q)(i) = p(q(i)).
std::vector<std::vector<int>> symmetric_table(int n) {
    std::vector<std::vector<int>> perms;
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    do {
        perms.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    const int order = static_cast<int>(perms.size());
    std::map<std::vector<int>, int> index;
    for (int i = 0; i < order; ++i) index[perms[i]] = i;
    std::vector<std::vector<int>> t(order, std::vector<int>(order));
    for (int a = 0; a < order; ++a)
        for (int b = 0; b < order; ++b) {
            std::vector<int> c(n);
            for (int i = 0; i < n; ++i) c[i] = perms[a][perms[b][i]];
            t[a][b] = index[c];
        }
    return t;
}

// Q8 as signed axes: index 2*axis + (sign<0), axes ordered 1, i, j, k.
std::vector<std::vector<int>> quaternion_table() {
    // axis multiplication: result axis and sign for axes {1,i,j,k}.
    static const int axis_mul[4][4] = {
        {0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
    static const int sign_mul[4][4] = {
        {1, 1, 1, 1}, {1, -1, 1, -1}, {1, -1, -1, 1}, {1, 1, -1, -1}};
    std::vector<std::vector<int>> t(8, std::vector<int>(8));
    for (int a = 0; a < 8; ++a)
        for (int b = 0; b < 8; ++b) {
            const int ax = a / 2, bx = b / 2;
            int sign = (a % 2 ? -1 : 1) * (b % 2 ? -1 : 1) * sign_mul[ax][bx];
            t[a][b] = 2 * axis_mul[ax][bx] + (sign < 0 ? 1 : 0);
        }
    return t;
}

std::vector<std::vector<int>> product_table(
    const std::vector<std::vector<int>>& ta,
    const std::vector<std::vector<int>>& tb) {
    const int na = static_cast<int>(ta.size());
    const int nb = static_cast<int>(tb.size());
    if (na * nb > FiniteGroup::kMaxOrder)
        throw UnsupportedGroup("product order " + std::to_string(na * nb) +
                               " exceeds cap");
    std::vector<std::vector<int>> t(na * nb, std::vector<int>(na * nb));
    for (int a1 = 0; a1 < na; ++a1)
        for (int b1 = 0; b1 < nb; ++b1)
            for (int a2 = 0; a2 < na; ++a2)
                for (int b2 = 0; b2 < nb; ++b2)
                    t[a1 * nb + b1][a2 * nb + b2] =
                        ta[a1][a2] * nb + tb[b1][b2];
    return t;
}

int parse_param(const std::string& spec, const std::string& prefix) {
    std::string num = spec.substr(prefix.size());
    if (num.empty() || num.find_first_not_of("0123456789") != std::string::npos)
        throw UnsupportedGroup("bad parameter in '" + spec + "'");
    return std::stoi(num);
}

struct Factor {
    std::vector<std::vector<int>> table;
    std::map<std::string, int> names;
};

Factor make_factor(const std::string& spec) {
    Factor f;
    if (spec.rfind("Z:", 0) == 0) {
        int n = parse_param(spec, "Z:");
        if (n < 1 || n > FiniteGroup::kMaxOrder)
            throw UnsupportedGroup(spec);
        f.table = cyclic_table(n);
    } else if (spec.rfind("D:", 0) == 0) {
        int n = parse_param(spec, "D:");
        if (n < 1 || 2 * n > FiniteGroup::kMaxOrder)
            throw UnsupportedGroup(spec);
        f.table = dihedral_table(n);
        f.names["s"] = n;
        for (int k = 1; k < n; ++k) {
            f.names["r" + std::to_string(k)] = k;
            f.names["sr" + std::to_string(k)] = n + k;
        }
        if (n > 1) f.names["r"] = 1;
    } else if (spec.rfind("S:", 0) == 0) {
        int n = parse_param(spec, "S:");
        if (n < 1 || n > 5) throw UnsupportedGroup(spec + " (S:n needs n <= 5)");
        f.table = symmetric_table(n);
    } else if (spec == "Q8") {
        f.table = quaternion_table();
        f.names["-1"] = 1;
        f.names["i"] = 2;
        f.names["j"] = 4;
        f.names["k"] = 6;
    } else if (spec.rfind("file:", 0) == 0) {
        std::ifstream in(spec.substr(5));
        if (!in) throw UnsupportedGroup("cannot open " + spec.substr(5));
        nlohmann::json doc;
        try {
            in >> doc;
        } catch (const nlohmann::json::exception& e) {
            throw UnsupportedGroup("bad JSON in " + spec.substr(5) + ": " +
                                   e.what());
        }
        if (!doc.contains("order") || !doc.contains("table"))
            throw UnsupportedGroup("group file needs {order, table}");
        f.table = doc["table"].get<std::vector<std::vector<int>>>();
        if (static_cast<int>(f.table.size()) != doc["order"].get<int>())
            throw UnsupportedGroup("order field disagrees with table size");
    } else {
        throw UnsupportedGroup("unrecognized spec '" + spec + "'");
    }
    return f;
}

}  // namespace

NamedGroup make_group(const std::string& spec) {
    std::vector<std::string> parts;
    {
        size_t start = 0;
        while (true) {
            size_t pos = spec.find('x', start);
            if (pos == std::string::npos) {
                parts.push_back(spec.substr(start));
                break;
            }
            parts.push_back(spec.substr(start, pos - start));
            start = pos + 1;
        }
    }
    if (parts.empty() || parts.front().empty())
        throw UnsupportedGroup("empty group spec");

    Factor acc = make_factor(parts[0]);
    for (size_t i = 1; i < parts.size(); ++i) {
        Factor next = make_factor(parts[i]);
        acc.table = product_table(acc.table, next.table);
        acc.names.clear();  // named generators only for single factors
    }
    NamedGroup out;
    out.group = FiniteGroup::from_cayley(std::move(acc.table));
    out.spec = spec;
    out.element_names = std::move(acc.names);
    return out;
}

std::vector<int> parse_elements(const NamedGroup& g, const std::string& text) {
    std::vector<int> out;
    std::string token;
    auto flush = [&](const std::string& tok) {
        if (tok.empty()) return;
        auto named = g.element_names.find(tok);
        if (named != g.element_names.end()) {
            out.push_back(named->second);
            return;
        }
        if (tok.find_first_not_of("0123456789") != std::string::npos)
            throw UnsupportedGroup("unknown element '" + tok + "'");
        int idx = std::stoi(tok);
        if (idx < 0 || idx >= g.group->order())
            throw UnsupportedGroup("element index " + tok + " out of range");
        out.push_back(idx);
    };
    std::string normalized = text;
    std::replace(normalized.begin(), normalized.end(), ',', ' ');
    std::istringstream stream(normalized);
    while (stream >> token) flush(token);
    return out;
}

}  // namespace hsp
