use eonsim::learning::{classify, entropy, info_gain, train_tree, LabeledDataset, TreeNode};

fn indent(depth: usize) -> String {
    "  ".repeat(depth)
}

fn print_node(node: &TreeNode, attributes: &[String], depth: usize) {
    match node {
        TreeNode::Leaf { label } => println!("{}-> {label}", indent(depth)),
        TreeNode::Split { attribute, branches, .. } => {
            for (value, child) in branches {
                println!("{}{} = {value}?", indent(depth), attributes[*attribute]);
                print_node(child, attributes, depth + 1);
            }
        }
    }
}

fn main() {
    // The classic play-outside dataset: four weather attributes, one
    // yes/no label. Small enough to read the whole induced tree.
    let rows = [
        (["sunny", "hot", "high", "weak"], "no"),
        (["sunny", "hot", "high", "strong"], "no"),
        (["overcast", "hot", "high", "weak"], "yes"),
        (["rain", "mild", "high", "weak"], "yes"),
        (["rain", "cool", "normal", "weak"], "yes"),
        (["rain", "cool", "normal", "strong"], "no"),
        (["overcast", "cool", "normal", "strong"], "yes"),
        (["sunny", "mild", "high", "weak"], "no"),
        (["sunny", "cool", "normal", "weak"], "yes"),
        (["rain", "mild", "normal", "weak"], "yes"),
        (["sunny", "mild", "normal", "strong"], "yes"),
        (["overcast", "mild", "high", "strong"], "yes"),
        (["overcast", "hot", "normal", "weak"], "yes"),
        (["rain", "mild", "high", "strong"], "no"),
    ];
    let dataset = LabeledDataset {
        attributes: ["outlook", "temp", "humidity", "wind"]
            .map(String::from)
            .to_vec(),
        rows: rows
            .iter()
            .map(|(attrs, label)| (attrs.map(String::from).to_vec(), label.to_string()))
            .collect(),
    };

    // Splits choose the attribute with the highest information gain.
    println!("class entropy: {:.4} bits", entropy(&dataset));
    for (i, name) in dataset.attributes.iter().enumerate() {
        println!("  gain({name}) = {:.4}", info_gain(&dataset, i));
    }

    let tree = train_tree(&dataset, 4).unwrap();
    println!("\ninduced tree:");
    print_node(&tree.root, &tree.attributes, 0);

    // Classification walks the splits; attribute values never seen during
    // training fall back to the branch majority.
    for row in [
        ["sunny", "cool", "high", "strong"],
        ["overcast", "mild", "normal", "weak"],
        ["foggy", "mild", "normal", "weak"],
    ] {
        let owned = row.map(String::from);
        println!("{row:?} -> {}", classify(&tree, &owned));
    }
}
