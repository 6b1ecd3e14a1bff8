// Command-line front end: fixture audit, scenario listing, cocycle table
// emission, sequence verification and reports.
//
// Exit status: 0 verified, 2 verified with existence verdicts, 1 failure or
// mismatch, 3 undecided.

#include <schur/report.hpp>

#include <CLI11.hpp>

#include <iostream>

namespace {

using namespace schur;

struct Paths {
    std::string root = SCHUR_SOURCE_DIR;
    std::string fixtures;   // defaults to <root>/fixtures

    std::filesystem::path scenario_dir() const { return std::filesystem::path(root) / "scenarios"; }
    std::filesystem::path fixture_dir() const {
        return fixtures.empty() ? std::filesystem::path(root) / "fixtures" : std::filesystem::path(fixtures);
    }
};

/// "Table 1" for captions that start with a table number, else the fixture name.
std::string fixture_title(const FixtureSet& fs, const std::string& name) {
    auto it = fs.captions.find(name);
    if (it != fs.captions.end() && it->second.rfind("Table ", 0) == 0) {
        auto colon = it->second.find(':');
        return it->second.substr(0, colon);
    }
    return name;
}

int cmd_fixtures_check(const Paths& p) {
    FixtureSet fs = load_fixtures(p.fixture_dir());
    auto checks = check_all(fs);
    int failed = 0;
    for (const auto& c : checks) {
        std::cout << (c.pass ? "PASS " : "FAIL ") << c.kind << " " << c.subject;
        if (!c.detail.empty()) std::cout << ": " << c.detail;
        std::cout << "\n";
        if (!c.pass) ++failed;
    }
    std::cout << checks.size() - std::size_t(failed) << " of " << checks.size() << " checks pass\n";
    if (failed) {
        auto first = std::find_if(checks.begin(), checks.end(), [](const FixtureCheck& c) { return !c.pass; });
        std::cerr << "first failure: " << first->kind << " " << first->subject << ": " << first->detail << "\n";
        return 1;
    }
    return 0;
}

int cmd_scenarios_list(const Paths& p) {
    for (const auto& path : list_scenarios(p.scenario_dir())) {
        Scenario sc = load_scenario(path);
        std::cout << sc.name << "  G = (Z/2)^" << sc.group.rank << ", g(C) = " << sc.c->genus() << ", g(D) = " << sc.d->genus();
        if (!sc.title.empty()) std::cout << "  " << sc.title;
        std::cout << "\n";
        for (const auto& seq : sc.sequences) std::cout << "  sequence " << seq.name << " (" << seq.members.size() << " members)\n";
    }
    return 0;
}

int cmd_emit(const Paths& p, const std::string& scenario, const std::string& bundle) {
    Scenario sc = find_scenario(p.scenario_dir(), scenario);
    const auto& b = sc.bundle(bundle);
    TwoCochain a = expr_cocycle(sc.curve(b.curve), b.expr);
    std::cout << format_table(a);
    if (!b.fixture) {
        std::cout << "no linked fixture\n";
        return 0;
    }
    FixtureSet fs = load_fixtures(p.fixture_dir());
    const TwoCochain& f = fs.table(*b.fixture);
    bool cohomologous = is_coboundary(multiply(a, inverse(f))).coboundary;
    auto cells = differing_cells(a, f);
    std::string title = fixture_title(fs, *b.fixture);
    std::cout << "cohomologous to " << title << ": " << (cohomologous ? "yes" : "no") << "\n";
    std::cout << "entrywise equal to " << title << ": " << (cells.empty() ? "yes" : "no, " + describe_cells(cells)) << "\n";
    return cohomologous ? 0 : 1;
}

int cmd_verify(const Paths& p, const std::string& scenario, const std::string& sequence, const std::string& chars,
               const std::string& format) {
    Scenario sc = find_scenario(p.scenario_dir(), scenario);
    const auto& seq = sc.sequence(sequence);
    auto [mode, values] = parse_character_mode(sc, seq, chars);
    SequenceReport r = full_report(sc, seq, mode, values);
    bool fixtures_ok = true;
    bool linked = std::any_of(r.members.begin(), r.members.end(), [](const MemberReport& m) { return m.fixture.has_value(); });
    if (linked) {
        attach_fixture_matches(r, load_fixtures(p.fixture_dir()));
        for (const auto& m : r.members) fixtures_ok = fixtures_ok && m.fixture_matches.value_or(true);
    }
    if (format == "json") std::cout << report_json(r).dump(2) << "\n";
    else std::cout << report_text(r);
    return fixtures_ok ? exit_status(r.verdict) : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exceptional sequences of line bundles on surfaces isogenous to a higher product"};
    app.require_subcommand(1);
    Paths paths;
    app.add_option("--root", paths.root, "directory holding scenarios/ and fixtures/")->capture_default_str();
    app.add_option("--fixtures", paths.fixtures, "fixture directory (default <root>/fixtures)");

    auto* fixtures = app.add_subcommand("fixtures", "fixture audit");
    fixtures->require_subcommand(1);
    auto* fixtures_check = fixtures->add_subcommand("check", "check cocycle conditions, product identities and witnesses");

    auto* scenarios = app.add_subcommand("scenarios", "scenario files");
    scenarios->require_subcommand(1);
    auto* scenarios_list = scenarios->add_subcommand("list", "list scenarios and their sequences");

    std::string scenario, bundle, sequence, chars = "symbolic", format = "text";
    auto* emit = app.add_subcommand("emit", "print the cocycle of a named bundle and compare it with its fixture");
    emit->add_option("scenario", scenario)->required();
    emit->add_option("bundle", bundle)->required();

    auto* verify = app.add_subcommand("verify", "verify a sequence");
    verify->add_option("scenario", scenario)->required();
    verify->add_option("sequence", sequence)->required();
    verify->add_option("chars", chars, "symbolic, all, or name=chi:element,...")->capture_default_str();
    verify->add_option("--format", format)->check(CLI::IsMember({"text", "json"}))->capture_default_str();

    auto* report = app.add_subcommand("report", "full report on a scenario's sequence");
    std::string report_sequence = "main";
    report->add_option("scenario", scenario)->required();
    report->add_option("--sequence", report_sequence)->capture_default_str();
    report->add_option("--chars", chars, "symbolic, all, or name=chi:element,...")->capture_default_str();
    report->add_option("--format", format)->check(CLI::IsMember({"text", "json"}))->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (fixtures_check->parsed()) return cmd_fixtures_check(paths);
        if (scenarios_list->parsed()) return cmd_scenarios_list(paths);
        if (emit->parsed()) return cmd_emit(paths, scenario, bundle);
        if (verify->parsed()) return cmd_verify(paths, scenario, sequence, chars, format);
        if (report->parsed()) return cmd_verify(paths, scenario, report_sequence, chars, format);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
