import os

import frontmatter


REQUIRED_KEYS = ("author", "title", "description", "tags", "license")


def header_confirm(path: str) -> None:
    post = frontmatter.load(path)
    for key in REQUIRED_KEYS:
        assert key in post.keys(), f"{key} is not found in {path}"
    assert isinstance(post["tags"], list), f"tags must be a list in {path}"


if __name__ == "__main__":
    # Check the README of every subpackage under `eacomm`.
    for root, dirs, files in os.walk("eacomm"):
        for file in files:
            if file == "README.md":
                header_confirm(os.path.join(root, file))
