#include "splitenum/oracle.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <numeric>
#include <sstream>

namespace splitenum::oracle {

namespace {

void requireAtMost(int n, int cap, const char* what)
{
    if (n > cap)
        throw TooLarge(std::string(what) + ": at most " + std::to_string(cap) + " vertices supported, got " +
                       std::to_string(n));
    if (n < 0)
        throw std::invalid_argument(std::string(what) + ": negative vertex count");
}

std::uint16_t fullMask(int n) { return static_cast<std::uint16_t>((1u << n) - 1u); }

} // namespace

// ------------------------------------------------------------- SmallGraph

SmallGraph::SmallGraph(int n) : n_(n) { requireAtMost(n, kMaxVertices, "SmallGraph"); }

void SmallGraph::addEdge(int u, int v)
{
    if (u == v || u < 0 || v < 0 || u >= n_ || v >= n_)
        throw std::invalid_argument("addEdge: invalid endpoints");
    adj_[u] |= static_cast<std::uint16_t>(1u << v);
    adj_[v] |= static_cast<std::uint16_t>(1u << u);
}

int SmallGraph::degree(int v) const { return std::popcount(adj_[v]); }

std::size_t SmallGraph::edgeCount() const
{
    std::size_t s = 0;
    for (int v = 0; v < n_; ++v)
        s += static_cast<std::size_t>(degree(v));
    return s / 2;
}

bool SmallGraph::isConnected() const
{
    if (n_ == 0)
        return true;
    std::uint16_t seen = 1, frontier = 1;
    while (frontier) {
        std::uint16_t next = 0;
        for (int v = 0; v < n_; ++v)
            if ((frontier >> v) & 1u)
                next |= adj_[v];
        frontier = static_cast<std::uint16_t>(next & ~seen);
        seen |= next;
    }
    return seen == fullMask(n_);
}

SmallGraph SmallGraph::induced(std::uint16_t mask) const
{
    std::array<int, kMaxVertices> index{};
    int k = 0;
    for (int v = 0; v < n_; ++v)
        if ((mask >> v) & 1u)
            index[v] = k++;
    SmallGraph h(k);
    for (int u = 0; u < n_; ++u)
        for (int v = u + 1; v < n_; ++v)
            if (((mask >> u) & 1u) && ((mask >> v) & 1u) && hasEdge(u, v))
                h.addEdge(index[u], index[v]);
    return h;
}

SmallGraph SmallGraph::withVertex(std::uint16_t mask) const
{
    SmallGraph h(n_ + 1);
    h.adj_ = adj_;
    for (int v = 0; v < n_; ++v)
        if ((mask >> v) & 1u)
            h.addEdge(n_, v);
    return h;
}

SmallGraph SmallGraph::withoutVertex(int v) const
{
    return induced(static_cast<std::uint16_t>(fullMask(n_) & ~(1u << v)));
}

std::string SmallGraph::upperTriangle() const
{
    std::string s;
    for (int u = 0; u < n_; ++u)
        for (int v = u + 1; v < n_; ++v)
            s += hasEdge(u, v) ? '1' : '0';
    return s;
}

SmallGraph SmallGraph::fromUpperTriangle(int n, const std::string& bits)
{
    SmallGraph g(n);
    if (bits.size() != static_cast<std::size_t>(n * (n - 1) / 2))
        throw std::invalid_argument("adjacency string has the wrong length");
    std::size_t k = 0;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v, ++k) {
            if (bits[k] == '1')
                g.addEdge(u, v);
            else if (bits[k] != '0')
                throw std::invalid_argument("adjacency string must contain only 0 and 1");
        }
    return g;
}

SmallGraph path(int n)
{
    SmallGraph g(n);
    for (int v = 0; v + 1 < n; ++v)
        g.addEdge(v, v + 1);
    return g;
}

SmallGraph cycle(int n)
{
    SmallGraph g = path(n);
    if (n >= 3)
        g.addEdge(n - 1, 0);
    return g;
}

SmallGraph complete(int n)
{
    SmallGraph g(n);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            g.addEdge(u, v);
    return g;
}

SmallGraph CanonicalKey::graph() const
{
    SmallGraph g(n);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if ((rows[u] >> v) & 1u)
                g.addEdge(u, v);
    return g;
}

// ------------------------------------------------------- canonical search

namespace {

using Partition = std::vector<std::vector<int>>;

// Splits cells by neighbour counts into every cell until stable. The split
// order only depends on the counts, so the result commutes with relabeling.
void refine(const SmallGraph& g, Partition& cells)
{
    for (bool changed = true; changed;) {
        changed = false;
        std::vector<std::uint16_t> masks;
        for (const auto& c : cells) {
            std::uint16_t m = 0;
            for (int v : c)
                m |= static_cast<std::uint16_t>(1u << v);
            masks.push_back(m);
        }
        Partition next;
        for (const auto& cell : cells) {
            if (cell.size() == 1) {
                next.push_back(cell);
                continue;
            }
            std::vector<std::pair<std::vector<int>, int>> sig;
            for (int v : cell) {
                std::vector<int> s;
                for (auto m : masks)
                    s.push_back(std::popcount(static_cast<std::uint16_t>(g.neighbors(v) & m)));
                sig.push_back({std::move(s), v});
            }
            std::sort(sig.begin(), sig.end());
            std::size_t start = 0;
            for (std::size_t i = 1; i <= sig.size(); ++i) {
                if (i == sig.size() || sig[i].first != sig[start].first) {
                    std::vector<int> part;
                    for (std::size_t j = start; j < i; ++j)
                        part.push_back(sig[j].second);
                    next.push_back(std::move(part));
                    start = i;
                }
            }
        }
        changed = next.size() != cells.size();
        cells = std::move(next);
    }
}

struct SearchResult {
    CanonicalKey best;
    bool have = false;
    std::uint64_t count = 0; // leaves attaining `best`
};

CanonicalKey relabel(const SmallGraph& g, const std::vector<int>& order)
{
    CanonicalKey key;
    key.n = g.order();
    for (int i = 0; i < key.n; ++i) {
        std::uint16_t row = 0;
        for (int j = 0; j < key.n; ++j)
            if (g.hasEdge(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]))
                row |= static_cast<std::uint16_t>(1u << j);
        key.rows[static_cast<std::size_t>(i)] = row;
    }
    return key;
}

void search(const SmallGraph& g, Partition cells, SearchResult& out)
{
    refine(g, cells);
    auto target = std::find_if(cells.begin(), cells.end(), [](const auto& c) { return c.size() > 1; });
    if (target == cells.end()) {
        std::vector<int> order;
        for (const auto& c : cells)
            order.push_back(c[0]);
        const CanonicalKey key = relabel(g, order);
        if (!out.have || key < out.best) {
            out.best = key;
            out.have = true;
            out.count = 1;
        } else if (key == out.best) {
            ++out.count;
        }
        return;
    }
    const auto index = static_cast<std::size_t>(target - cells.begin());
    const std::vector<int> cell = *target;
    for (int v : cell) {
        Partition child;
        child.reserve(cells.size() + 1);
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i != index) {
                child.push_back(cells[i]);
                continue;
            }
            child.push_back({v});
            std::vector<int> rest;
            for (int w : cell)
                if (w != v)
                    rest.push_back(w);
            child.push_back(std::move(rest));
        }
        search(g, std::move(child), out);
    }
}

SearchResult runSearch(const SmallGraph& g)
{
    SearchResult r;
    Partition root(1);
    for (int v = 0; v < g.order(); ++v)
        root[0].push_back(v);
    if (g.order() == 0) {
        r.have = true;
        r.count = 1;
        return r;
    }
    search(g, std::move(root), r);
    return r;
}

} // namespace

CanonicalKey canonicalize(const SmallGraph& g)
{
    requireAtMost(g.order(), kMaxVertices, "canonicalize");
    return runSearch(g).best;
}

std::uint64_t automorphismCount(const SmallGraph& g)
{
    requireAtMost(g.order(), kMaxGeneration, "automorphismCount");
    return runSearch(g).count;
}

// ------------------------------------------------------------ recognizers

namespace {

bool hasSplit(const SmallGraph& g, std::uint16_t s)
{
    const int low = std::countr_zero(s);
    const std::uint16_t rest = static_cast<std::uint16_t>(s & ~(1u << low));
    // V1 always contains the lowest vertex of S; iterate subsets of the rest.
    for (std::uint16_t sub = rest;; sub = static_cast<std::uint16_t>((sub - 1) & rest)) {
        const std::uint16_t v1 = static_cast<std::uint16_t>(sub | (1u << low));
        const std::uint16_t v2 = static_cast<std::uint16_t>(s & ~v1);
        if (std::popcount(v1) >= 2 && std::popcount(v2) >= 2) {
            std::uint16_t n1 = 0, n2 = 0;
            for (int v = 0; v < g.order(); ++v) {
                if (((v1 >> v) & 1u) && (g.neighbors(v) & v2))
                    n1 |= static_cast<std::uint16_t>(1u << v);
                if (((v2 >> v) & 1u) && (g.neighbors(v) & v1))
                    n2 |= static_cast<std::uint16_t>(1u << v);
            }
            bool ok = true;
            for (int v = 0; v < g.order() && ok; ++v)
                if ((n1 >> v) & 1u)
                    ok = (g.neighbors(v) & n2) == n2;
            if (ok)
                return true;
        }
        if (sub == 0)
            break;
    }
    return false;
}

} // namespace

bool isDHbySplits(const SmallGraph& g)
{
    requireAtMost(g.order(), kMaxSplitCheck, "isDHbySplits");
    const std::uint16_t all = fullMask(g.order());
    for (std::uint32_t s = 0; s <= all; ++s)
        if (std::popcount(s) >= 4 && !hasSplit(g, static_cast<std::uint16_t>(s)))
            return false;
    return true;
}

bool isDHbyPruning(const SmallGraph& g)
{
    SmallGraph h = g;
    while (h.order() > 1) {
        int victim = -1;
        for (int v = 0; v < h.order() && victim < 0; ++v)
            if (h.degree(v) == 1)
                victim = v;
        for (int u = 0; u < h.order() && victim < 0; ++u)
            for (int v = u + 1; v < h.order() && victim < 0; ++v) {
                const auto nu = static_cast<std::uint16_t>(h.neighbors(u) & ~(1u << v));
                const auto nv = static_cast<std::uint16_t>(h.neighbors(v) & ~(1u << u));
                if (nu == nv)
                    victim = v;
            }
        if (victim < 0)
            return false;
        h = h.withoutVertex(victim);
    }
    return true;
}

// ------------------------------------------------------------- generators

std::set<CanonicalKey> connectedGraphs(int n)
{
    requireAtMost(n, kMaxGeneration, "connectedGraphs");
    std::set<CanonicalKey> level{canonicalize(SmallGraph(n >= 1 ? 1 : 0))};
    if (n <= 1)
        return level;
    for (int k = 2; k <= n; ++k) {
        std::set<CanonicalKey> next;
        for (const auto& key : level) {
            const SmallGraph g = key.graph();
            for (std::uint32_t mask = 1; mask <= fullMask(k - 1); ++mask)
                next.insert(canonicalize(g.withVertex(static_cast<std::uint16_t>(mask))));
        }
        level = std::move(next);
    }
    return level;
}

std::set<CanonicalKey> generateAllDH(int n)
{
    requireAtMost(n, kMaxGeneration, "generateAllDH");
    if (n < 1)
        return {};
    std::set<CanonicalKey> level{canonicalize(SmallGraph(1))};
    for (int k = 2; k <= n; ++k) {
        std::set<CanonicalKey> next;
        for (const auto& key : level) {
            const SmallGraph g = key.graph();
            for (int v = 0; v < g.order(); ++v) {
                const auto bit = static_cast<std::uint16_t>(1u << v);
                next.insert(canonicalize(g.withVertex(bit)));                                          // pendant
                next.insert(canonicalize(g.withVertex(static_cast<std::uint16_t>(g.neighbors(v) | bit)))); // true twin
                if (g.neighbors(v))
                    next.insert(canonicalize(g.withVertex(g.neighbors(v)))); // false twin
            }
        }
        level = std::move(next);
    }
    return level;
}

namespace {

// Unlabeled trees on k vertices from all Pruefer sequences.
std::set<CanonicalKey> trees(int k)
{
    std::set<CanonicalKey> out;
    if (k == 1) {
        out.insert(canonicalize(SmallGraph(1)));
        return out;
    }
    if (k == 2) {
        out.insert(canonicalize(path(2)));
        return out;
    }
    std::vector<int> seq(static_cast<std::size_t>(k - 2), 0);
    while (true) {
        std::vector<int> deg(static_cast<std::size_t>(k), 1);
        for (int x : seq)
            ++deg[static_cast<std::size_t>(x)];
        SmallGraph t(k);
        for (int x : seq) {
            int leaf = 0;
            while (deg[static_cast<std::size_t>(leaf)] != 1)
                ++leaf;
            t.addEdge(leaf, x);
            --deg[static_cast<std::size_t>(leaf)];
            --deg[static_cast<std::size_t>(x)];
        }
        int u = -1, v = -1;
        for (int i = 0; i < k; ++i)
            if (deg[static_cast<std::size_t>(i)] == 1)
                (u < 0 ? u : v) = i;
        t.addEdge(u, v);
        out.insert(canonicalize(t));
        std::size_t i = 0;
        while (i < seq.size() && ++seq[i] == k)
            seq[i++] = 0;
        if (i == seq.size())
            break;
    }
    return out;
}

void compositions(int n, int parts, std::vector<int>& cur, const std::function<void()>& visit)
{
    if (parts == 0) {
        if (n == 0)
            visit();
        return;
    }
    for (int s = 1; s <= n - (parts - 1); ++s) {
        cur.push_back(s);
        compositions(n - s, parts - 1, cur, visit);
        cur.pop_back();
    }
}

} // namespace

std::set<CanonicalKey> generateAll3LP(int n)
{
    requireAtMost(n, kMaxGeneration, "generateAll3LP");
    std::set<CanonicalKey> out;
    for (int k = 1; k <= n; ++k) {
        for (const auto& tk : trees(k)) {
            const SmallGraph t = tk.graph();
            std::vector<int> sizes;
            compositions(n, k, sizes, [&] {
                std::vector<int> first(static_cast<std::size_t>(k) + 1, 0);
                std::partial_sum(sizes.begin(), sizes.end(), first.begin() + 1);
                SmallGraph g(n);
                for (int a = 0; a < k; ++a)
                    for (int b = a; b < k; ++b) {
                        if (a != b && !t.hasEdge(a, b))
                            continue;
                        for (int u = first[static_cast<std::size_t>(a)]; u < first[static_cast<std::size_t>(a) + 1]; ++u)
                            for (int v = first[static_cast<std::size_t>(b)]; v < first[static_cast<std::size_t>(b) + 1]; ++v)
                                if (u < v)
                                    g.addEdge(u, v);
                    }
                out.insert(canonicalize(g));
            });
        }
    }
    return out;
}

std::set<CanonicalKey> generateAll(grammars::GraphClassId id, int n)
{
    return id == grammars::GraphClassId::DH ? generateAllDH(n) : generateAll3LP(n);
}

BigInt countLabeled(grammars::GraphClassId id, int n, CountMode mode)
{
    if (mode == CountMode::Automatic)
        mode = n <= kMaxExhaustive ? CountMode::ExhaustiveFilter : CountMode::Orbit;
    if (n < 1)
        throw std::invalid_argument("countLabeled: n must be at least 1");
    const auto members = generateAll(id, n);
    BigInt total = 0;
    if (mode == CountMode::Orbit) {
        BigInt fact = 1;
        for (int i = 2; i <= n; ++i)
            fact *= i;
        for (const auto& key : members)
            total += fact / automorphismCount(key.graph());
        return total;
    }
    requireAtMost(n, kMaxExhaustive, "countLabeled (exhaustive filter)");
    const int edges = n * (n - 1) / 2;
    std::vector<std::pair<int, int>> pairs;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            pairs.push_back({u, v});
    for (std::uint32_t bits = 0; bits < (1u << edges); ++bits) {
        SmallGraph g(n);
        for (int e = 0; e < edges; ++e)
            if ((bits >> e) & 1u)
                g.addEdge(pairs[static_cast<std::size_t>(e)].first, pairs[static_cast<std::size_t>(e)].second);
        if (g.isConnected() && members.count(canonicalize(g)))
            total += 1;
    }
    return total;
}

std::string dumpGraphs(const std::set<CanonicalKey>& keys)
{
    std::ostringstream os;
    for (const auto& key : keys)
        os << key.n << ' ' << key.graph().upperTriangle() << '\n';
    return os.str();
}

std::vector<SmallGraph> parseGraphDump(const std::string& text)
{
    std::vector<SmallGraph> out;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty())
            continue;
        std::istringstream ls(line);
        int n = 0;
        std::string bits;
        ls >> n;
        ls >> bits;
        out.push_back(SmallGraph::fromUpperTriangle(n, bits));
    }
    return out;
}

} // namespace splitenum::oracle
