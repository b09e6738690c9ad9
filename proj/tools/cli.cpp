#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "aclaudit/evaluator.hpp"
#include "aclaudit/fixtures.hpp"
#include "aclaudit/icacls_import.hpp"
#include "aclaudit/oracle.hpp"
#include "aclaudit/reporting.hpp"
#include "aclaudit/sddl_codec.hpp"
#include "aclaudit/snapshot_io.hpp"

namespace aclaudit::cli {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::vector<ReportRight> parse_rights(const std::string& spec) {
    if (spec == "all") return {kAllRights.begin(), kAllRights.end()};
    if (spec == "atomic") return atomic_rights();
    std::vector<ReportRight> out;
    for (const auto& name : split_list(spec)) {
        std::optional<ReportRight> right;
        for (const auto r : kAllRights) {
            if (iequals(name_of(r), name)) right = r;
        }
        if (!right) throw UsageError("unknown right \"" + name + "\" (expected all, atomic or names like Read,Write)");
        out.push_back(*right);
    }
    if (out.empty()) throw UsageError("--rights selects nothing");
    return out;
}

void emit(const std::string& path, const std::string& data, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << data;
    } else {
        write_text_file(path, data);
    }
}

std::pair<std::uint64_t, std::uint64_t> parse_seed_range(const std::string& text) {
    try {
        const auto dots = text.find("..");
        if (dots == std::string::npos) {
            const auto v = std::stoull(text);
            return {v, v};
        }
        const auto lo = std::stoull(text.substr(0, dots));
        const auto hi = std::stoull(text.substr(dots + 2));
        if (hi < lo) throw UsageError("empty seed range " + text);
        return {lo, hi};
    } catch (const std::logic_error&) {
        throw UsageError("expected --seeds N or N..M, got \"" + text + "\"");
    }
}

// ---------------------------------------------------------------- inspect

struct InspectOptions {
    std::string snapshot;
    std::string users;
    bool all_users = false;
    std::string root;
    bool recurse = false;
    bool include_root = false;
    std::string rights = "all";
    std::string sort;
    std::string out;
    unsigned threads = 1;
};

int do_inspect(const InspectOptions& opt, std::ostream& out) {
    const Snapshot snapshot = read_snapshot_file(opt.snapshot);
    const auto rights = parse_rights(opt.rights);

    std::vector<Sid> users;
    if (opt.all_users) {
        std::vector<const Principal*> list;
        for (const auto& p : snapshot.directory.principals()) {
            if (p.kind == PrincipalKind::User) list.push_back(&p);
        }
        std::stable_sort(list.begin(), list.end(),
                         [](const Principal* a, const Principal* b) { return to_lower(a->name) < to_lower(b->name); });
        for (const auto* p : list) users.push_back(p->sid);
    } else {
        for (const auto& key : split_list(opt.users)) users.push_back(resolve_principal(snapshot.directory, key).sid);
        if (users.empty()) throw UsageError("--users selects nobody");
    }

    Evaluator evaluator(snapshot);
    const FolderIndex& index = evaluator.folders();
    const std::size_t root = opt.root.empty() ? 0 : index.at(opt.root);
    std::vector<std::size_t> selected = opt.recurse ? index.descendants(root) : index.children(root);
    if (opt.include_root) selected.insert(selected.begin(), root);
    std::vector<std::string> folders;
    for (const auto f : selected) folders.push_back(index.node(f).path);

    const RightsMatrix matrix = evaluator.build_matrix(users, folders, rights, opt.threads);
    ReportTable table = make_table(matrix, rights);
    if (!opt.sort.empty()) {
        std::string column = opt.sort;
        SortDirection direction = SortDirection::Ascending;
        if (const auto colon = column.rfind(':'); colon != std::string::npos) {
            const std::string dir = column.substr(colon + 1);
            if (dir == "desc") {
                direction = SortDirection::Descending;
            } else if (dir != "asc") {
                throw UsageError("sort direction must be asc or desc");
            }
            column.resize(colon);
        }
        try {
            table = sort_table(table, column, direction);
        } catch (const UnknownColumn& e) {
            throw UsageError(e.what());
        }
    }
    emit(opt.out, render_csv(table), out);
    return kOk;
}

// ---------------------------------------------------------- import-icacls

int do_import(const std::string& dump, const std::string& directory_file, const std::string& out_file, bool strict,
              std::ostream& out, std::ostream& err) {
    const Directory directory = load_directory(read_text_file(directory_file));
    const auto listing = parse_icacls(read_text_file(dump));
    IcaclsImport imported = import_icacls(listing, directory);
    for (const auto& d : imported.defects) err << "warning: " << to_string(d.kind) << " " << d.subject << "\n";
    Snapshot snapshot{1, directory, std::move(imported.root)};
    emit(out_file, save_snapshot(snapshot), out);
    return strict && !imported.defects.empty() ? kInputError : kOk;
}

// ------------------------------------------------------------------- sddl

nlohmann::json describe(const SecurityDescriptor& sd) {
    nlohmann::json j;
    if (sd.owner) j["owner"] = sd.owner->str();
    if (sd.group) j["group"] = sd.group->str();
    j["protected"] = sd.is_protected;
    auto aces = nlohmann::json::array();
    for (const auto& ace : sd.dacl.aces) {
        nlohmann::json flags = nlohmann::json::array();
        const std::string f = flags_to_string(ace.flags);
        if (!f.empty()) {
            for (const auto& part : split_list(std::string(f.begin(), f.end()))) flags.push_back(part);
        }
        std::vector<std::string> rights;
        for (const auto r : decompose(ace.mask).rights) rights.emplace_back(name_of(r));
        aces.push_back({{"type", ace.is_deny() ? "deny" : "allow"},
                        {"sid", ace.sid.str()},
                        {"mask", to_hex(ace.mask)},
                        {"flags", flags},
                        {"rights", rights}});
    }
    j["aces"] = aces;
    return j;
}

// ----------------------------------------------------------------- verify

struct VerifyOptions {
    std::string seeds = "1..100";
    std::string snapshot;
    std::string counterexample;
};

struct Mismatch {
    std::string user;
    std::string folder;
    std::string right;
    bool engine;
};

std::optional<Mismatch> compare_with_oracle(const Snapshot& snapshot, std::size_t& pairs) {
    Evaluator evaluator(snapshot);
    std::vector<Sid> users{well_known::kEveryone};
    for (const auto& p : snapshot.directory.principals()) users.push_back(p.sid);
    std::vector<std::string> folders;
    for_each_folder(snapshot.root, [&](const FolderNode& n) { folders.push_back(n.path); });
    const auto matrix = evaluator.build_matrix(users, folders, kAllRights);
    for (const auto& row : matrix.rows) {
        ++pairs;
        const auto expected = oracle::oracle_rights(snapshot, row.user, row.folder);
        for (const auto r : kAllRights) {
            if (row.value(r) != expected.value(r)) {
                return Mismatch{row.user.str(), row.folder, std::string(name_of(r)), row.value(r)};
            }
        }
    }
    return std::nullopt;
}

int do_verify(const VerifyOptions& opt, std::ostream& out, std::ostream& err) {
    std::size_t pairs = 0;
    std::size_t checked = 0;
    auto report = [&](const Snapshot& snapshot, const Mismatch& m, const std::string& label) {
        err << "mismatch (" << label << "): user " << m.user << " folder " << m.folder << " right " << m.right
            << " engine=" << (m.engine ? "Yes" : "No") << " oracle=" << (m.engine ? "No" : "Yes") << "\n";
        if (opt.counterexample.empty()) {
            err << save_snapshot(snapshot);
        } else {
            write_text_file(opt.counterexample, save_snapshot(snapshot));
            err << "counterexample written to " << opt.counterexample << "\n";
        }
        return kMismatch;
    };

    if (!opt.snapshot.empty()) {
        const Snapshot snapshot = read_snapshot_file(opt.snapshot);
        if (auto m = compare_with_oracle(snapshot, pairs)) return report(snapshot, *m, opt.snapshot);
        checked = 1;
    } else {
        const auto [lo, hi] = parse_seed_range(opt.seeds);
        for (std::uint64_t seed = lo;; ++seed) {
            const Snapshot snapshot = gen_random(verification_params(seed));
            if (auto m = compare_with_oracle(snapshot, pairs)) return report(snapshot, *m, "seed " + std::to_string(seed));
            ++checked;
            if (seed == hi) break;
        }
    }
    out << "snapshots=" << checked << " pairs=" << pairs << " mismatches=0\n";
    return kOk;
}

// ------------------------------------------------------------------ bench

int do_bench(std::size_t users, std::size_t folders, std::uint64_t seed, unsigned threads, std::ostream& out) {
    GenParams params;
    params.seed = seed;
    params.users = users;
    params.folders = folders;
    params.groups = std::max<std::size_t>(1, users / 5);
    params.max_depth = 6;
    params.max_aces = 4;
    const Snapshot snapshot = gen_random(params);

    std::vector<Sid> user_list;
    for (const auto& p : snapshot.directory.principals()) {
        if (p.kind == PrincipalKind::User) user_list.push_back(p.sid);
    }
    std::vector<std::string> folder_list;
    for_each_folder(snapshot.root, [&](const FolderNode& n) { folder_list.push_back(n.path); });

    const auto start = std::chrono::steady_clock::now();
    Evaluator evaluator(snapshot);
    const auto matrix = evaluator.build_matrix(user_list, folder_list, kAllRights, threads);
    const auto elapsed = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

    out << "users=" << user_list.size() << " folders=" << folder_list.size() << " rights=" << matrix.rights.size()
        << " elapsed_ms=" << static_cast<long long>(elapsed + 0.5) << "\n";
    return kOk;
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Effective NTFS access rights audit over folder-tree snapshots", "aclaudit"};
    app.require_subcommand(1);

    InspectOptions inspect;
    auto* cmd_inspect = app.add_subcommand("inspect", "Report effective rights of users on folders as CSV");
    cmd_inspect->add_option("--snapshot", inspect.snapshot, "Snapshot JSON file")->required();
    auto* users_opt = cmd_inspect->add_option("--users", inspect.users, "Comma-separated users (SID, DOMAIN\\name or name)");
    auto* all_users_opt = cmd_inspect->add_flag("--all-users", inspect.all_users, "Every user in the directory, by name");
    users_opt->excludes(all_users_opt);
    cmd_inspect->add_option("--root", inspect.root, "Folder whose subfolders are inspected (default: snapshot root)");
    cmd_inspect->add_flag("--recurse", inspect.recurse, "Inspect all descendants, not only immediate subfolders");
    cmd_inspect->add_flag("--include-root", inspect.include_root, "Also inspect the root folder itself");
    cmd_inspect->add_option("--rights", inspect.rights, "all, atomic, or comma-separated right names")
        ->capture_default_str();
    cmd_inspect->add_option("--sort", inspect.sort, "COLUMN[:asc|desc]");
    cmd_inspect->add_option("--out", inspect.out, "CSV output file (default: stdout)");
    cmd_inspect->add_option("--threads", inspect.threads, "Worker threads for the matrix")->check(CLI::Range(1u, 256u));
    cmd_inspect->footer("CSV output opens directly in Excel (Data > From Text/CSV).");

    std::string dump, directory_file, import_out;
    bool strict = false;
    auto* cmd_import = app.add_subcommand("import-icacls", "Convert an `icacls <path> /t` listing into a snapshot");
    cmd_import->add_option("--dump", dump, "icacls output text file")->required();
    cmd_import->add_option("--directory", directory_file, "Snapshot JSON providing domain and principals")->required();
    cmd_import->add_option("--out", import_out, "Snapshot output file (default: stdout)");
    cmd_import->add_flag("--strict", strict, "Exit 2 when accounts are unresolved or folders synthesized");

    std::string sddl_text;
    auto* cmd_sddl = app.add_subcommand("sddl", "Parse or canonicalize SDDL text");
    cmd_sddl->require_subcommand(1);
    auto* sddl_parse = cmd_sddl->add_subcommand("parse", "Print the descriptor as JSON");
    sddl_parse->add_option("text", sddl_text, "SDDL string")->required();
    auto* sddl_canon = cmd_sddl->add_subcommand("canon", "Print canonical SDDL");
    sddl_canon->add_option("text", sddl_text, "SDDL string")->required();

    std::string variant, fixture_out;
    std::optional<std::uint64_t> fixture_seed;
    GenParams gen;
    auto* cmd_fixture = app.add_subcommand("fixture", "Write the lab fixture or a seeded random snapshot");
    auto* variant_opt = cmd_fixture->add_option("--variant", variant, "root-only or icacls")
                            ->check(CLI::IsMember({"root-only", "icacls"}));
    auto* seed_opt = cmd_fixture->add_option("--seed", fixture_seed, "Generate a random snapshot with this seed");
    variant_opt->excludes(seed_opt);
    cmd_fixture->add_option("--folders", gen.folders, "Random: folder count")->capture_default_str();
    cmd_fixture->add_option("--users", gen.users, "Random: user count")->capture_default_str();
    cmd_fixture->add_option("--groups", gen.groups, "Random: group count")->capture_default_str();
    cmd_fixture->add_option("--max-depth", gen.max_depth, "Random: maximum depth")->capture_default_str();
    cmd_fixture->add_option("--out", fixture_out, "Output file (default: stdout)");

    VerifyOptions verify;
    auto* cmd_verify = app.add_subcommand("verify", "Compare the engine with the brute-force oracle");
    auto* seeds_opt = cmd_verify->add_option("--seeds", verify.seeds, "Seed N or range N..M")->capture_default_str();
    auto* verify_snapshot = cmd_verify->add_option("--snapshot", verify.snapshot, "Verify this snapshot instead");
    seeds_opt->excludes(verify_snapshot);
    cmd_verify->add_option("--counterexample", verify.counterexample,
                           "Write the first failing snapshot here (default: stderr)");

    std::size_t bench_users = 100, bench_folders = 1000;
    std::uint64_t bench_seed = 1;
    unsigned bench_threads = 1;
    auto* cmd_bench = app.add_subcommand("bench", "Time a full matrix on a generated snapshot");
    cmd_bench->add_option("--users", bench_users, "Users")->capture_default_str()->check(CLI::PositiveNumber);
    cmd_bench->add_option("--folders", bench_folders, "Folders")->capture_default_str()->check(CLI::PositiveNumber);
    cmd_bench->add_option("--seed", bench_seed, "Generator seed")->capture_default_str();
    cmd_bench->add_option("--threads", bench_threads, "Worker threads")->capture_default_str()->check(CLI::Range(1u, 256u));

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*cmd_inspect) {
            if (inspect.users.empty() && !inspect.all_users) throw UsageError("one of --users or --all-users is required");
            return do_inspect(inspect, out);
        }
        if (*cmd_import) return do_import(dump, directory_file, import_out, strict, out, err);
        if (*sddl_parse) {
            std::vector<std::string> warnings;
            const auto sd = parse_sddl(sddl_text, &warnings);
            for (const auto& w : warnings) err << "warning: " << w << "\n";
            out << describe(sd).dump(2) << "\n";
            return kOk;
        }
        if (*sddl_canon) {
            out << emit_sddl(parse_sddl(sddl_text)) << "\n";
            return kOk;
        }
        if (*cmd_fixture) {
            Snapshot snapshot;
            if (fixture_seed) {
                gen.seed = *fixture_seed;
                snapshot = gen_random(gen);
            } else if (variant == "icacls") {
                snapshot = gen_lab_fixture(FixtureVariant::Icacls);
            } else if (variant == "root-only") {
                snapshot = gen_lab_fixture(FixtureVariant::RootOnly);
            } else {
                throw UsageError("one of --variant or --seed is required");
            }
            emit(fixture_out, save_snapshot(snapshot), out);
            return kOk;
        }
        if (*cmd_verify) return do_verify(verify, out, err);
        if (*cmd_bench) return do_bench(bench_users, bench_folders, bench_seed, bench_threads, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const InvalidParams& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const UnknownPrincipal& e) {
        err << "error: " << e.what() << "\n";
        return kUnknownKey;
    } catch (const AmbiguousName& e) {
        err << "error: " << e.what() << "\n";
        return kUnknownKey;
    } catch (const UnknownPath& e) {
        err << "error: " << e.what() << "\n";
        return kUnknownKey;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const ValidationFailure& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const Error& e) {
        // I/O failures (unreadable or unwritable files).
        err << "error: " << e.what() << "\n";
        return kInputError;
    }
    return kUsage;
}

}  // namespace aclaudit::cli
