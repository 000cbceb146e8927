#include <indram/cleaning.hpp>
#include <indram/errors.hpp>
#include <indram/rng.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

namespace indram
{
    auto cleaning_constants(int q, int delta, const Ratio & p, const Ratio & eta) -> CleaningConstants
    {
        if (q < 1)
            throw InvalidInput("q must be at least 1");
        if (delta < 0)
            throw InvalidInput("delta must be non-negative");
        if (p.num() <= 0 || p > Ratio(1))
            throw InvalidInput("p must lie in (0,1]");
        if (eta.num() <= 0)
            throw InvalidInput("eta must be positive");

        CleaningConstants k;
        k.q = q;
        k.delta = delta;
        k.p = p;
        k.eta = eta;
        k.c = std::log2(2.0 * q * static_cast<double>(p.den())) - std::log2(static_cast<double>(p.num()));
        double inv_eta = static_cast<double>(eta.den()) / static_cast<double>(eta.num());
        k.log2_lambda_matching = -13.0 * k.c * inv_eta;
        k.log2_lambda_matching_half = -1.0 - 12.0 * k.c * inv_eta;

        // lambda_t = (p/2q)^{13/eps_t}, eps_{t+1} = eps_t lambda_t
        TowerNumber eps(std::log2(static_cast<double>(eta.den())) - std::log2(static_cast<double>(eta.num())));
        TowerNumber product(0.0);
        for (int t = 0; t <= delta; ++t) {
            auto lambda = eps.exp2().times(13.0 * k.c);
            k.neg_log2_eps.push_back(eps);
            k.neg_log2_lambda.push_back(lambda);
            product = product.plus(lambda);
            eps = eps.plus(lambda);
        }
        k.neg_log2_lambda_product = product;

        // T_0 = (p/2q)^{14/eta}, T_j = (p/2q)^{14/T_{j-1}}
        TowerNumber level(14.0 * k.c * inv_eta);
        k.tower_levels.push_back(level);
        for (int j = 1; j <= delta; ++j) {
            level = level.exp2().times(14.0 * k.c);
            k.tower_levels.push_back(level);
        }
        k.neg_log2_lambda_tower = level;
        return k;
    }

    auto host_block(const Graph & host, const std::vector<int> & rows, const std::vector<int> & cols, const EdgeColoring * coloring,
        int c) -> Biadjacency
    {
        Biadjacency b(static_cast<int>(rows.size()), static_cast<int>(cols.size()));
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t j = 0; j < cols.size(); ++j)
                if (host.adjacent(rows[i], cols[j]) && (c < 0 || coloring->color(rows[i], cols[j]) == c))
                    b.set(static_cast<int>(i), static_cast<int>(j));
        return b;
    }

    namespace
    {
        auto sub_block(const Biadjacency & block, const std::vector<int> & rows, const std::vector<int> & cols) -> Biadjacency
        {
            Biadjacency b(static_cast<int>(rows.size()), static_cast<int>(cols.size()));
            for (std::size_t i = 0; i < rows.size(); ++i)
                for (std::size_t j = 0; j < cols.size(); ++j)
                    if (block.test(rows[i], cols[j]))
                        b.set(static_cast<int>(i), static_cast<int>(j));
            return b;
        }

        /// Indices of the k largest scores; ties go to the smaller rank.
        auto top_k(const std::vector<int> & score, const std::vector<int> & rank, int k) -> std::vector<int>
        {
            std::vector<int> idx(score.size());
            std::iota(idx.begin(), idx.end(), 0);
            std::sort(idx.begin(), idx.end(), [&](int a, int b) {
                if (score[a] != score[b])
                    return score[a] > score[b];
                return rank[a] < rank[b];
            });
            idx.resize(static_cast<std::size_t>(k));
            std::sort(idx.begin(), idx.end());
            return idx;
        }

        auto degrees_into(const std::vector<VertexSet> & rows, const VertexSet & subset) -> std::vector<int>
        {
            std::vector<int> d;
            d.reserve(rows.size());
            for (auto & r : rows)
                d.push_back(r.intersection_count(subset));
            return d;
        }

        /// Alternately keeps the rows best connected to the columns and vice versa.
        auto refine(const Biadjacency & block, const Biadjacency & transposed, std::vector<int> cols, int tr, int tc,
            const std::vector<int> & row_rank, const std::vector<int> & col_rank) -> std::pair<std::vector<int>, std::vector<int>>
        {
            std::vector<int> rows;
            for (int round = 0; round < 3; ++round) {
                rows = top_k(degrees_into(block.row, VertexSet::from_members(block.cols, cols)), row_rank, tr);
                cols = top_k(degrees_into(transposed.row, VertexSet::from_members(block.rows, rows)), col_rank, tc);
            }
            return {rows, cols};
        }

        auto next_combination(std::vector<int> & c, int n) -> bool
        {
            int k = static_cast<int>(c.size());
            for (int i = k - 1; i >= 0; --i)
                if (c[i] < n - k + i) {
                    ++c[i];
                    for (int j = i + 1; j < k; ++j)
                        c[j] = c[j - 1] + 1;
                    return true;
                }
            return false;
        }

        auto first_combination(int k) -> std::vector<int>
        {
            std::vector<int> c(static_cast<std::size_t>(k));
            std::iota(c.begin(), c.end(), 0);
            return c;
        }

        auto identity_rank(int n) -> std::vector<int>
        {
            std::vector<int> r(static_cast<std::size_t>(n));
            std::iota(r.begin(), r.end(), 0);
            return r;
        }
    }

    auto find_lower_regular_pair(const Biadjacency & block, const Ratio & eps, int target_rows, int target_cols, std::uint64_t seed,
        const PairSearchOptions & options) -> PairSearchResult
    {
        if (target_rows < 1 || target_rows > block.rows || target_cols < 1 || target_cols > block.cols)
            throw InvalidInput("target sizes " + std::to_string(target_rows) + "x" + std::to_string(target_cols) + " do not fit the "
                + std::to_string(block.rows) + "x" + std::to_string(block.cols) + " block");
        if (eps.num() <= 0)
            throw InvalidInput("eps must be positive");
        auto density = block_density(block);
        RegularityParams params;
        params.mode = RegularityMode::lower_only;
        params.p = options.p.value_or(density / Ratio(2));
        params.L = options.L.value_or(eps * Ratio(std::min(target_rows, target_cols)));
        if (params.p.num() <= 0)
            throw PreconditionFailed("block has density 0, no lower-regular pair can carry a positive density");
        validate(params);

        PairSearchResult out;
        out.paper_size = 0.5 * std::min(block.rows, block.cols) * std::pow(density.to_double(), 12.0 / eps.to_double());
        std::set<std::pair<std::vector<int>, std::vector<int>>> tried;
        std::uint64_t check_seed = derive_seed(seed, 0x5eed);

        auto accept = [&](const std::vector<int> & rows, const std::vector<int> & cols, const char * method) -> bool {
            if (! tried.insert({rows, cols}).second)
                return false;
            ++out.candidates_tried;
            auto verdict = certify_block(sub_block(block, rows, cols), params, options.sampled_trials, check_seed);
            bool ok = verdict.status == VerdictStatus::certified
                || (options.accept_inconclusive && verdict.status == VerdictStatus::inconclusive);
            if (ok) {
                out.rows = rows;
                out.cols = cols;
                out.verdict = std::move(verdict);
                out.method = method;
            }
            return ok;
        };

        auto transposed = block.transpose();
        if (target_rows == block.rows && target_cols == block.cols) {
            if (accept(identity_rank(block.rows), identity_rank(block.cols), "whole"))
                return out;
            throw AttemptsExhausted("search exhausted: the whole block is the only candidate and it is not certified");
        }

        {
            auto row_rank = identity_rank(block.rows);
            auto col_rank = identity_rank(block.cols);
            std::vector<int> col_degree;
            for (auto & c : transposed.row)
                col_degree.push_back(c.count());
            auto [rows, cols] = refine(block, transposed, top_k(col_degree, col_rank, target_cols), target_rows, target_cols, row_rank,
                col_rank);
            if (accept(rows, cols, "greedy"))
                return out;
        }

        for (int k = 0; k < options.random_attempts; ++k) {
            Rng rng(derive_seed(seed, static_cast<std::uint64_t>(k)));
            auto row_rank = identity_rank(block.rows);
            auto col_rank = identity_rank(block.cols);
            rng.shuffle(row_rank);
            rng.shuffle(col_rank);
            // columns in the neighborhood of a random row come first
            auto x = static_cast<int>(rng.below(static_cast<std::uint64_t>(block.rows)));
            std::vector<int> score(static_cast<std::size_t>(block.cols));
            for (int y = 0; y < block.cols; ++y)
                score[y] = block.test(x, y) ? 1 : 0;
            auto [rows, cols] = refine(block, transposed, top_k(score, col_rank, target_cols), target_rows, target_cols, row_rank, col_rank);
            if (accept(rows, cols, "random"))
                return out;
        }

        if (block.rows <= options.exhaustive_parts && block.cols <= options.exhaustive_parts) {
            std::int64_t examined = 0;
            auto rows = first_combination(target_rows);
            do {
                auto cols = first_combination(target_cols);
                do {
                    if (++examined > options.exhaustive_budget)
                        throw AttemptsExhausted("search exhausted: exhaustive budget of " + std::to_string(options.exhaustive_budget)
                            + " pairs used up");
                    if (accept(rows, cols, "exhaustive"))
                        return out;
                } while (next_combination(cols, block.cols));
            } while (next_combination(rows, block.rows));
            throw AttemptsExhausted("search exhausted: no " + std::to_string(target_rows) + "x" + std::to_string(target_cols)
                + " sub-pair is (" + params.L.to_string() + ", " + params.p.to_string() + ")-lower-regular (exhaustive)");
        }
        throw AttemptsExhausted("search exhausted: no certified " + std::to_string(target_rows) + "x" + std::to_string(target_cols)
            + " sub-pair after " + std::to_string(out.candidates_tried) + " candidates");
    }

    auto EdgeCertificate::certified() const -> bool
    {
        if (regularity && regularity->status != VerdictStatus::certified)
            return false;
        if (common && ! common->holds)
            return false;
        return regularity || common;
    }

    auto CleaningOutcome::certified() const -> bool
    {
        return std::all_of(certificates.begin(), certificates.end(), [](auto & c) { return c.certified(); });
    }

    namespace
    {
        auto sizes_of(const std::vector<std::vector<int>> & parts) -> std::vector<int>
        {
            std::vector<int> s;
            for (auto & p : parts)
                s.push_back(static_cast<int>(p.size()));
            return s;
        }

        auto lower_params(const Ratio & L, const Ratio & p, int q) -> RegularityParams
        {
            RegularityParams params;
            params.L = L;
            params.p = p / Ratio(4 * q);
            params.mode = RegularityMode::lower_only;
            return params;
        }
    }

    auto matching_clean(const std::vector<Edge> & matching, const Blowup & blowup, const std::vector<std::vector<int>> & parts,
        const EdgeColoring & coloring, const Ratio & p, int q, const Ratio & eta, std::uint64_t seed, const MatchingCleanOptions & options)
        -> CleaningOutcome
    {
        if (q < 1 || q > EdgeColoring::max_colors)
            throw InvalidInput("q out of range");
        if (p.num() <= 0 || p > Ratio(1))
            throw InvalidInput("p must lie in (0,1]");
        auto & base = blowup.base;
        if (parts.size() != static_cast<std::size_t>(base.size()))
            throw InvalidInput("one part per base vertex required");
        int target = options.target_size;
        for (std::size_t v = 0; v < parts.size(); ++v)
            if (target < 1 || target > static_cast<int>(parts[v].size()))
                throw InvalidInput("target size " + std::to_string(target) + " does not fit part " + std::to_string(v) + " of size "
                    + std::to_string(parts[v].size()));
        std::vector<bool> covered(parts.size(), false);
        for (auto & e : matching) {
            if (e.u < 0 || e.v >= base.size() || ! base.adjacent(e.u, e.v))
                throw InvalidInput("matching edge " + edge_key(e) + " is not a base edge");
            if (covered[e.u] || covered[e.v])
                throw InvalidInput("edges are not pairwise disjoint at " + edge_key(e));
            covered[e.u] = covered[e.v] = true;
        }

        CleaningOutcome out;
        out.aux_coloring = EdgeColoring(base, q, 0);
        out.trimmed_parts.resize(parts.size());
        for (std::size_t v = 0; v < parts.size(); ++v)
            if (! covered[v])
                out.trimmed_parts[v].assign(parts[v].begin(), parts[v].begin() + target);

        auto search = options.search;
        search.L = options.L;
        if (! search.p)
            search.p = p / Ratio(4 * q);
        for (std::size_t i = 0; i < matching.size(); ++i) {
            auto & e = matching[i];
            auto & rows = parts[e.u];
            auto & cols = parts[e.v];
            std::vector<std::int64_t> count(static_cast<std::size_t>(q), 0);
            for (int x : rows)
                for (int y : cols)
                    if (blowup.host.adjacent(x, y))
                        ++count[coloring.color(x, y)];
            int best = 0;
            for (int c = 1; c < q; ++c)
                if (count[c] > count[best])
                    best = c;
            auto cells = static_cast<__int128>(rows.size()) * static_cast<__int128>(cols.size());
            // density count/cells < p/2q
            if (static_cast<__int128>(count[best]) * 2 * q * p.den() < static_cast<__int128>(p.num()) * cells) {
                std::string densities;
                for (int c = 0; c < q; ++c)
                    densities += " " + std::to_string(c) + ":" + Ratio(count[c], static_cast<std::int64_t>(cells)).to_string();
                throw PreconditionFailed("edge " + edge_key(e) + ": no color class reaches density p/2q = "
                    + (p / Ratio(2 * q)).to_string() + "; densities" + densities);
            }
            auto block = host_block(blowup.host, rows, cols, &coloring, best);
            PairSearchResult found;
            try {
                found = find_lower_regular_pair(block, eta, target, target, derive_seed(seed, i), search);
            }
            catch (const AttemptsExhausted & ex) {
                throw AttemptsExhausted("edge " + edge_key(e) + " color " + std::to_string(best) + ": " + ex.what());
            }
            for (int r : found.rows)
                out.trimmed_parts[e.u].push_back(rows[r]);
            for (int c : found.cols)
                out.trimmed_parts[e.v].push_back(cols[c]);
            out.aux_coloring.set(e.u, e.v, best);
            EdgeCertificate cert;
            cert.edge = e;
            cert.color = best;
            cert.regularity = std::move(found.verdict);
            out.certificates.push_back(std::move(cert));
        }
        StageLog log;
        log.stage = "matching";
        log.size = target;
        log.edges = matching;
        log.part_sizes = sizes_of(out.trimmed_parts);
        out.shrink_log.push_back(std::move(log));
        return out;
    }

    auto regularity_clean(const Blowup & blowup, const EdgeColoring & coloring, const Ratio & p, int q, const Ratio & eta,
        std::uint64_t seed, const RegularityCleanOptions & options) -> CleaningOutcome
    {
        auto & base = blowup.base;
        if (base.size() == 0)
            throw InvalidInput("empty base graph");
        if (! coloring.matches(blowup.host))
            throw InvalidInput("coloring does not match the host edge set");
        auto decomposition = vizing_matchings(base);
        int stages = static_cast<int>(decomposition.matchings.size());
        int s = static_cast<int>(blowup.parts.front().size());
        for (auto & part : blowup.parts)
            s = std::min(s, static_cast<int>(part.size()));
        if (s < 1)
            throw InvalidInput("every part must be non-empty");

        std::vector<int> sizes = options.stage_sizes;
        int s0 = options.s0.value_or((s + 1) / 2);
        if (! sizes.empty()) {
            if (static_cast<int>(sizes.size()) != stages)
                throw InvalidInput("expected " + std::to_string(stages) + " stage sizes, got " + std::to_string(sizes.size()));
            s0 = sizes.back();
        }
        if (s0 < 1 || s0 > s)
            throw InvalidInput("final size s0 = " + std::to_string(s0) + " must lie in [1, " + std::to_string(s) + "]");
        if (sizes.empty())
            for (int j = 1; j <= stages; ++j) {
                double f = std::pow(static_cast<double>(s0) / s, static_cast<double>(j) / stages);
                sizes.push_back(j == stages ? s0 : std::max(s0, static_cast<int>(std::ceil(s * f - 1e-9))));
            }
        for (std::size_t j = 0; j < sizes.size(); ++j)
            if (sizes[j] > (j == 0 ? s : sizes[j - 1]) || sizes[j] < 1)
                throw InvalidInput("stage sizes must be positive and non-increasing");

        Ratio L = eta * Ratio(s0);
        auto constants = cleaning_constants(q, base.max_degree(), p, eta);

        CleaningOutcome out;
        out.aux_coloring = EdgeColoring(base, q, 0);
        if (constants.neg_log2_lambda_product.level() > 0 || constants.neg_log2_lambda_product.to_double() > std::log2(s))
            out.regime_flags.push_back("paper lambda below 1/s: engineering stage sizes replace the tower schedule");
        std::vector<std::vector<int>> parts = blowup.parts;
        for (auto & part : parts)
            std::sort(part.begin(), part.end());

        MatchingCleanOptions stage_options;
        stage_options.L = L;
        stage_options.search = options.search;
        stage_options.search.accept_inconclusive = options.accept_inconclusive_stages || options.search.accept_inconclusive;
        for (int j = 0; j < stages; ++j) {
            int t = stages - 1 - j;
            if (j > 0)
                sizes[j] = std::min(sizes[j], sizes[j - 1]);
            CleaningOutcome stage;
            while (true) {
                stage_options.target_size = sizes[j];
                stage_options.L = eta * Ratio(std::min(s0, sizes[j]));
                try {
                    stage = matching_clean(decomposition.matchings[t], blowup, parts, coloring, p, q, eta,
                        derive_seed(seed, static_cast<std::uint64_t>(t)), stage_options);
                    break;
                }
                catch (const PreconditionFailed & ex) {
                    throw PreconditionFailed("stage " + std::to_string(t) + ": " + ex.what());
                }
                catch (const AttemptsExhausted & ex) {
                    if (! options.adaptive || sizes[j] <= options.adaptive_floor)
                        throw AttemptsExhausted("stage " + std::to_string(t) + ": " + ex.what());
                    int smaller = std::max(options.adaptive_floor, sizes[j] / 2);
                    out.regime_flags.push_back("stage " + std::to_string(t) + ": no sub-pair of size " + std::to_string(sizes[j])
                        + ", retried at " + std::to_string(smaller));
                    sizes[j] = smaller;
                }
            }
            for (std::size_t i = static_cast<std::size_t>(j) + 1; i < sizes.size(); ++i)
                sizes[i] = std::min(sizes[i], sizes[j]);
            for (auto & cert : stage.certificates)
                out.aux_coloring.set(cert.edge.u, cert.edge.v, cert.color);
            parts = std::move(stage.trimmed_parts);
            StageLog log;
            log.stage = "M" + std::to_string(t);
            log.size = sizes[j];
            log.edges = decomposition.matchings[t];
            auto factor_index = std::min<std::size_t>(static_cast<std::size_t>(t), constants.neg_log2_lambda.size() - 1);
            log.neg_log2_paper_factor = constants.neg_log2_lambda[factor_index].to_string();
            log.part_sizes = sizes_of(parts);
            out.shrink_log.push_back(std::move(log));
        }

        if (sizes.back() < s0)
            L = eta * Ratio(sizes.back());
        auto params = lower_params(L, p, q);
        for (auto & e : base.edges()) {
            int c = out.aux_coloring.color(e.u, e.v);
            auto block = host_block(blowup.host, parts[e.u], parts[e.v], &coloring, c);
            EdgeCertificate cert;
            cert.edge = e;
            cert.color = c;
            cert.regularity = certify_block(block, params, options.search.sampled_trials, derive_seed(seed, 0xce47));
            out.certificates.push_back(std::move(cert));
        }
        out.trimmed_parts = std::move(parts);
        return out;
    }

    namespace
    {
        auto q_power(int q, int l) -> BigInt
        {
            BigInt r = 1;
            for (int i = 0; i < l; ++i)
                r *= q;
            return r;
        }
    }

    auto min_degree_color_select(const Graph & host, const EdgeColoring & coloring, const std::vector<int> & x,
        const std::vector<std::vector<int>> & ys, const Ratio & L, const Ratio & p, int q) -> ColorSelection
    {
        auto l = static_cast<int>(ys.size());
        if (l == 0)
            throw InvalidInput("at least one set Y_i is required");
        if (p.num() <= 0 || p > Ratio(1))
            throw InvalidInput("p must lie in (0,1]");
        for (int i = 0; i < l; ++i)
            if (Ratio(static_cast<std::int64_t>(ys[i].size())) < L)
                throw PreconditionFailed("|Y_" + std::to_string(i) + "| = " + std::to_string(ys[i].size()) + " is below L = " + L.to_string());
        if (Ratio(static_cast<std::int64_t>(x.size())) < Ratio(2 * l) * L)
            throw PreconditionFailed("|X| = " + std::to_string(x.size()) + " is below 2 l L = " + (Ratio(2 * l) * L).to_string());

        int n = host.size();
        std::vector<VertexSet> sets;
        for (auto & y : ys)
            sets.push_back(VertexSet::from_members(n, y));

        ColorSelection out;
        out.low_degree_counts.assign(static_cast<std::size_t>(l), 0);
        std::vector<int> survivors;
        for (int v : x) {
            bool low = false;
            for (int i = 0; i < l; ++i) {
                std::int64_t d = host.neighbors(v).intersection_count(sets[i]);
                if (static_cast<__int128>(2 * d) * p.den() < static_cast<__int128>(p.num()) * static_cast<std::int64_t>(ys[i].size())) {
                    ++out.low_degree_counts[i];
                    low = true;
                }
            }
            if (! low)
                survivors.push_back(v);
        }
        for (int cnt : out.low_degree_counts)
            if (exceeds(cnt, L))
                out.hypothesis_refuted = true;

        std::map<std::vector<int>, std::vector<int>> classes;
        std::vector<std::int64_t> count(static_cast<std::size_t>(q));
        for (int v : survivors) {
            std::vector<int> tuple;
            for (int i = 0; i < l; ++i) {
                std::fill(count.begin(), count.end(), 0);
                for (int y : ys[i])
                    if (host.adjacent(v, y))
                        ++count[coloring.color(v, y)];
                int best = 0;
                for (int c = 1; c < q; ++c)
                    if (count[c] > count[best])
                        best = c;
                if (static_cast<__int128>(count[best]) * 2 * q * p.den() < static_cast<__int128>(p.num()) * static_cast<std::int64_t>(ys[i].size()))
                    throw InvariantViolation("majority color of a high-degree vertex is below (p/2q)|Y_i|");
                tuple.push_back(best);
            }
            classes[tuple].push_back(v);
        }
        if (classes.empty())
            throw PreconditionFailed("no vertex of X keeps degree >= (p/2)|Y_i| into every Y_i");
        auto best = classes.begin();
        for (auto it = classes.begin(); it != classes.end(); ++it)
            if (it->second.size() > best->second.size())
                best = it;
        out.colors = best->first;
        out.x_star = best->second;
        std::sort(out.x_star.begin(), out.x_star.end());
        if (! out.hypothesis_refuted && BigInt(static_cast<std::int64_t>(out.x_star.size())) * 2 * q_power(q, l) < static_cast<std::int64_t>(x.size()))
            throw InvariantViolation("|X*| = " + std::to_string(out.x_star.size()) + " is below |X|/(2q^l)");
        return out;
    }

    auto min_colored_common(const Graph & host, const EdgeColoring & coloring, const std::vector<int> & x,
        const std::vector<std::vector<int>> & ys, const std::vector<int> & colors, int r, std::int64_t budget, std::int64_t spot_checks,
        std::uint64_t seed) -> std::pair<std::int64_t, bool>
    {
        std::vector<VertexSet> columns;
        std::vector<int> members;
        for (std::size_t i = 0; i < ys.size(); ++i)
            for (int y : ys[i]) {
                VertexSet s(static_cast<int>(x.size()));
                for (std::size_t j = 0; j < x.size(); ++j)
                    if (host.adjacent(x[j], y) && coloring.color(x[j], y) == colors[i])
                        s.set(static_cast<int>(j));
                members.push_back(static_cast<int>(columns.size()));
                columns.push_back(std::move(s));
            }
        if (columns.empty())
            return {static_cast<std::int64_t>(x.size()), true};
        return min_common_neighborhood(columns, members, r, budget, spot_checks, seed);
    }

    auto star_clean(const Graph & host, const EdgeColoring & coloring, const std::vector<int> & x,
        const std::vector<std::vector<int>> & ys, const Ratio & L, const Ratio & p, int q, int r, std::uint64_t seed,
        const StarCleanOptions & options) -> StarCleanResult
    {
        if (r < 1)
            throw InvalidInput("r must be at least 1");
        int h = options.h.value_or(4 * r);
        auto l = static_cast<int>(ys.size());
        StarCleanResult out;
        out.selection = min_degree_color_select(host, coloring, x, ys, L, p, q);
        out.colors = out.selection.colors;
        if (out.selection.hypothesis_refuted)
            out.regime_flags.push_back("regularity hypothesis refuted: some |X~_i| exceeds L");
        {
            std::int64_t total = 0;
            for (auto & y : ys)
                total += static_cast<std::int64_t>(y.size());
            // |X| >= (2q^l) 2 (2q/p)^{4l} sum |Y_i'|
            BigRational rhs = BigRational(4 * q_power(q, l) * total) * pow(BigRational(BigInt(2 * q * p.den()), BigInt(p.num())), 4 * l);
            if (BigRational(static_cast<std::int64_t>(x.size())) < rhs)
                out.regime_flags.push_back("|X| below (2q^l)(2(2q/p)^{4l}) sum |Y_i'|");
        }

        std::vector<std::vector<int>> column_subsets;
        std::vector<int> all;
        for (int i = 0; i < l; ++i) {
            column_subsets.emplace_back();
            for (int y : ys[i]) {
                column_subsets.back().push_back(static_cast<int>(all.size()));
                all.push_back(y);
            }
        }
        auto & xs = out.selection.x_star;
        Biadjacency gamma(static_cast<int>(xs.size()), static_cast<int>(all.size()));
        for (int i = 0; i < l; ++i)
            for (int col : column_subsets[i])
                for (std::size_t j = 0; j < xs.size(); ++j)
                    if (host.adjacent(xs[j], all[col]) && coloring.color(xs[j], all[col]) == out.colors[i])
                        gamma.set(static_cast<int>(j), col);

        Ratio pd = p / Ratio(2 * q);
        try {
            out.drc = simultaneous_drc(gamma, column_subsets, h, r, pd, seed, options.drc);
        }
        catch (const PreconditionFailed & ex) {
            throw InvariantViolation(std::string("selected colors violate the min-degree property: ") + ex.what());
        }
        if (! out.drc.feasible)
            out.regime_flags.push_back("simultaneous DRC feasibility inequality fails");
        BigInt num_hl = 1, den_hl = 1;
        for (int i = 0; i < h * l; ++i) {
            num_hl *= pd.num();
            den_hl *= pd.den();
        }
        for (int i = 0; i < l; ++i) {
            std::vector<int> kept;
            for (int col : out.drc.subsets[i])
                kept.push_back(all[col]);
            std::sort(kept.begin(), kept.end());
            if (BigInt(2 * static_cast<std::int64_t>(kept.size())) * den_hl < num_hl * static_cast<std::int64_t>(ys[i].size()))
                throw InvariantViolation("|Y_i''| below (1/2)(p/2q)^{hl}|Y_i'|");
            out.subsets.push_back(std::move(kept));
        }

        auto [min, exhaustive] = min_colored_common(host, coloring, x, out.subsets, out.colors, r, options.check_budget,
            options.spot_checks, derive_seed(seed, 0x57a2));
        auto denominator = static_cast<std::int64_t>(2 * q_power(q, l));
        out.guarantee.min_count = min;
        out.guarantee.bound_numerator = static_cast<std::int64_t>(x.size());
        out.guarantee.bound_denominator = denominator;
        out.guarantee.exhaustive = exhaustive;
        out.guarantee.holds = static_cast<__int128>(min) * min * denominator >= static_cast<__int128>(x.size());
        bool star_bound = static_cast<__int128>(xs.size()) * denominator >= static_cast<__int128>(x.size());
        if (! out.guarantee.holds) {
            if (star_bound && out.drc.bad_check == "exhaustive")
                throw InvariantViolation("common-neighborhood guarantee fails after an exhaustively refuted bad event");
            out.regime_flags.push_back("common-neighborhood guarantee sqrt(|X|/2q^l) fails");
        }
        return out;
    }

    auto drc_clean(const Blowup & blowup, const EdgeColoring & coloring, int r, int q, const Ratio & L, const Ratio & p,
        std::uint64_t seed, const std::optional<std::vector<int>> & a_side, const DrcCleanOptions & options) -> CleaningOutcome
    {
        auto & base = blowup.base;
        int n = base.size();
        if (! coloring.matches(blowup.host))
            throw InvalidInput("coloring does not match the host edge set");
        if (p.num() <= 0 || p > Ratio(1))
            throw InvalidInput("p must lie in (0,1]");
        std::vector<int> side(static_cast<std::size_t>(n), 1);
        if (a_side) {
            for (int a : *a_side) {
                if (a < 0 || a >= n)
                    throw InvalidInput("A-side vertex out of range");
                side[a] = 0;
            }
            for (auto & e : base.edges())
                if (side[e.u] == side[e.v])
                    throw PreconditionFailed("base edge " + edge_key(e) + " lies inside one side");
        }
        else {
            auto two = bipartition(base);
            if (! two)
                throw PreconditionFailed("base graph is not bipartite");
            side = *two;
        }

        int delta = base.max_degree();
        double c = std::log2(2.0 * q * static_cast<double>(p.den())) - std::log2(static_cast<double>(p.num()));
        CleaningOutcome out;
        out.aux_coloring = EdgeColoring(base, q, 0);
        std::vector<std::vector<int>> parts = blowup.parts;
        for (auto & part : parts)
            std::sort(part.begin(), part.end());

        {
            int s0 = -1, s = -1;
            for (int v = 0; v < n; ++v) {
                int size = static_cast<int>(parts[v].size());
                int & m = side[v] == 0 ? s : s0;
                m = m < 0 ? size : std::min(m, size);
            }
            double log2_L = std::log2(L.to_double());
            if (s0 > 0 && std::log2(s0) < log2_L + 5.0 * delta * delta * r * c)
                out.regime_flags.push_back("|Y_b| below L(2q/p)^{5 delta^2 r}");
            if (s > 0 && s0 > 0 && std::log2(s) < 2 + 5.0 * delta * c + std::log2(std::max(delta, 1)) + std::log2(s0))
                out.regime_flags.push_back("|X_a| below 4(2q/p)^{5 delta} delta s0");
        }

        std::vector<bool> star_held(static_cast<std::size_t>(n), false);
        auto delta_factor = TowerNumber(5.0 * delta * r * c).to_string();
        for (int a = 0; a < n; ++a) {
            if (side[a] != 0)
                continue;
            auto nb = base.neighbors(a).to_vector();
            if (nb.empty())
                continue;
            std::vector<std::vector<int>> ys;
            for (int b : nb)
                ys.push_back(parts[b]);
            StarCleanResult res;
            try {
                res = star_clean(blowup.host, coloring, parts[a], ys, L, p, q, r, derive_seed(seed, static_cast<std::uint64_t>(a)),
                    options.star);
            }
            catch (const PreconditionFailed & ex) {
                throw PreconditionFailed("star a=" + std::to_string(a) + ": " + ex.what());
            }
            catch (const AttemptsExhausted & ex) {
                throw AttemptsExhausted("star a=" + std::to_string(a) + ": " + ex.what());
            }
            star_held[a] = res.guarantee.holds;
            StageLog log;
            log.stage = "star a=" + std::to_string(a);
            for (std::size_t i = 0; i < nb.size(); ++i) {
                parts[nb[i]] = res.subsets[i];
                out.aux_coloring.set(a, nb[i], res.colors[i]);
                log.edges.push_back(make_edge(a, nb[i]));
            }
            for (auto & f : res.regime_flags)
                out.regime_flags.push_back("a=" + std::to_string(a) + ": " + f);
            log.size = static_cast<int>(parts[nb.front()].size());
            for (int b : nb)
                log.size = std::min(log.size, static_cast<int>(parts[b].size()));
            log.neg_log2_paper_factor = delta_factor;
            for (auto & part : parts)
                log.part_sizes.push_back(static_cast<int>(part.size()));
            out.shrink_log.push_back(std::move(log));
        }
        {
            StageLog log;
            log.stage = "final";
            log.neg_log2_paper_factor = TowerNumber(5.0 * delta * delta * r * c).to_string();
            for (auto & part : parts)
                log.part_sizes.push_back(static_cast<int>(part.size()));
            log.size = 0;
            out.shrink_log.push_back(std::move(log));
        }

        auto denominator = static_cast<std::int64_t>(2 * q_power(q, delta));
        for (int a = 0; a < n; ++a) {
            if (side[a] != 0)
                continue;
            auto nb = base.neighbors(a).to_vector();
            if (nb.empty())
                continue;
            std::vector<std::vector<int>> ys;
            std::vector<int> colors;
            for (int b : nb) {
                ys.push_back(parts[b]);
                colors.push_back(out.aux_coloring.color(a, b));
            }
            auto [min, exhaustive] = min_colored_common(blowup.host, coloring, parts[a], ys, colors, r, options.star.check_budget,
                options.star.spot_checks, derive_seed(seed, 0x4300 + static_cast<std::uint64_t>(a)));
            CommonNeighborhoodRecord rec;
            rec.a = a;
            rec.min_count = min;
            rec.bound_numerator = static_cast<std::int64_t>(parts[a].size());
            rec.bound_denominator = denominator;
            rec.exhaustive = exhaustive;
            rec.holds = static_cast<__int128>(min) * min * denominator >= static_cast<__int128>(parts[a].size());
            if (! rec.holds && star_held[a])
                throw InvariantViolation("common-neighborhood guarantee for a=" + std::to_string(a) + " lost after later stages only shrank Y_b");
            for (int b : nb) {
                EdgeCertificate cert;
                cert.edge = make_edge(a, b);
                cert.color = out.aux_coloring.color(a, b);
                cert.common = rec;
                out.certificates.push_back(std::move(cert));
            }
        }
        std::sort(out.certificates.begin(), out.certificates.end(), [](auto & x, auto & y) { return x.edge < y.edge; });
        out.trimmed_parts = std::move(parts);
        return out;
    }
}
