use spines::enumerate::odd_perms_sending;
use spines::perm::Perm4;
use spines::spine::{EdgeRec, Germ, Spine};

fn partial_wings_ok(map: &[[Option<usize>; 4]], edges: &[EdgeRec]) -> bool {
    let new = edges.last().unwrap();
    let mut starts: Vec<((usize, u8, u8), (usize, u8, u8))> = Vec::with_capacity(6);
    for (g, h) in [(new.a, new.b), (new.b, new.a)] {
        let p = new.perm_from(g);
        for cin in 0..4u8 {
            if cin == g.slot { continue; }
            starts.push(((h.vertex, h.slot, p.apply(cin)), (g.vertex, g.slot, cin)));
        }
    }
    let step = |(cv, cin, cout): (usize, u8, u8)| -> Option<(usize, u8, u8)> {
        let ei = map[cv][cout as usize]?;
        let rec = &edges[ei];
        let g = Germ::new(cv, cout);
        let p = rec.perm_from(g);
        Some((rec.other_end(g).vertex, p.apply(cout), p.apply(cin)))
    };
    let wing = |(cv, cin, cout): (usize, u8, u8)| (cv, cin.min(cout), cin.max(cout));
    for (fwd, back) in starts {
        let mut wings: Vec<(usize, u8, u8)> = Vec::new();
        let mut cur = fwd;
        let closed = loop {
            let w = wing(cur);
            if wings.contains(&w) { return false; }
            wings.push(w);
            match step(cur) {
                Some(next) if next == fwd => break true,
                Some(next) => cur = next,
                None => break false,
            }
        };
        if closed { continue; }
        let mut cur = back;
        loop {
            let w = wing(cur);
            if wings.contains(&w) { return false; }
            wings.push(w);
            match step(cur) {
                Some(next) => cur = next,
                None => break,
            }
        }
    }
    true
}

struct Ctx { nodes: Vec<u64>, leaves: u64, valid: u64 }

fn recurse(germs: &[Germ], used: &mut Vec<bool>, edges: &mut Vec<EdgeRec>,
           map: &mut Vec<[Option<usize>; 4]>, n: usize, ctx: &mut Ctx) {
    let first = match used.iter().position(|&u| !u) {
        Some(i) => i,
        None => {
            ctx.leaves += 1;
            let spine = Spine::new(n, edges.clone());
            if spine.validate().is_valid() { ctx.valid += 1; }
            return;
        }
    };
    used[first] = true;
    for j in (first + 1)..germs.len() {
        if used[j] { continue; }
        used[j] = true;
        let (a, b) = (germs[first], germs[j]);
        let ei = edges.len();
        map[a.vertex][a.slot as usize] = Some(ei);
        map[b.vertex][b.slot as usize] = Some(ei);
        for p in odd_perms_sending(a.slot, b.slot) {
            edges.push(EdgeRec::new(a, b, p));
            ctx.nodes[edges.len()] += 1;
            if partial_wings_ok(map, edges) {
                recurse(germs, used, edges, map, n, ctx);
            }
            edges.pop();
        }
        map[a.vertex][a.slot as usize] = None;
        map[b.vertex][b.slot as usize] = None;
        used[j] = false;
    }
    used[first] = false;
}

fn main() {
    let n = 3usize;
    let germs: Vec<Germ> = (0..n).flat_map(|v| (0..4u8).map(move |s| Germ::new(v, s))).collect();
    let _ = Perm4::IDENTITY;
    let mut used = vec![false; germs.len()];
    let mut edges = Vec::new();
    let mut map = vec![[None; 4]; n];
    let mut ctx = Ctx { nodes: vec![0; 2 * n + 1], leaves: 0, valid: 0 };
    let t = std::time::Instant::now();
    recurse(&germs, &mut used, &mut edges, &mut map, n, &mut ctx);
    println!("nodes per depth: {:?}", ctx.nodes);
    println!("leaves={} valid={} in {:?}", ctx.leaves, ctx.valid, t.elapsed());
}
