#include "support/fixtures.hpp"

#include "railcg/rng.hpp"

namespace railcg::testsupport {

CorridorFixture make_corridor_fixture(std::uint64_t seed, int n_services,
                                      Seconds spacing_mean) {
    CorridorFixture f;
    Network& net = f.net;
    int ent = add_block(net, "ent", 400, 40);
    int a1 = add_block(net, "a1", 1200, 45);
    int a2 = add_block(net, "a2", 1200, 45);
    int a3 = add_block(net, "a3", 1200, 45);
    int jin = add_block(net, "jin", 200, 40);
    int pA = add_block(net, "pA", 350, 25);
    int pB = add_block(net, "pB", 350, 25);
    int jout = add_block(net, "jout", 200, 40);
    int b1 = add_block(net, "b1", 1200, 45);
    int b2 = add_block(net, "b2", 1200, 45);
    int ext = add_block(net, "ext", 400, 40);
    link(net, ent, a1);
    link(net, a1, a2);
    link(net, a2, a3);
    link(net, a3, jin);
    link(net, jin, pA);
    link(net, jin, pB);
    link(net, pA, jout);
    link(net, pB, jout);
    link(net, jout, b1);
    link(net, b1, b2);
    link(net, b2, ext);
    add_point(net, "IN", PointKind::entry, {ent});
    add_point(net, "PA", PointKind::halt, {pA}, "MID");
    add_point(net, "PB", PointKind::halt, {pB}, "MID");
    add_point(net, "OUT", PointKind::exit, {ext});

    Rng rng(seed);
    Seconds t = 0;
    profiles::GenerationOptions opt = small_options();
    opt.speed_levels = {1.0, 0.85};
    for (int i = 0; i < n_services; ++i) {
        bool fast = rng.next_below(2) == 0;
        bool calls = rng.next_below(2) == 0;
        t += spacing_mean / 2 + static_cast<Seconds>(rng.next_below(
                                    static_cast<std::uint64_t>(spacing_mean)));
        TrainService s;
        s.id = "T" + std::to_string(i);
        s.entry_point = "IN";
        s.exit_point = "OUT";
        s.entry_time = t;
        if (calls) s.halts = {{"MID", 40}};
        s.max_speed = fast ? 42.0 : 28.0;
        s.accel = fast ? 0.9 : 0.5;
        s.decel = fast ? 1.0 : 0.6;
        s.scheduled_exit = s.entry_time + 1;  // placeholder until profiles exist
        profiles::ProfileSet set = profiles::generate_profiles(s, i, net, opt, 0);
        s.scheduled_exit = s.entry_time + profiles::fastest_chain_seconds(set) + 10;
        f.services.push_back(s);
    }
    return f;
}

}  // namespace railcg::testsupport
