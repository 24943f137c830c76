"""Async fetch helpers and generators."""

import asyncio


async def fetch_all(urls):
    results = []
    for url in urls:
        data = await fetch_one(url)
        results.append(data)
    return results


async def fetch_one(url):
    await asyncio.sleep(0)
    return url


def walk(tree):
    yield tree
    for child in tree.get('children', ()):
        yield from walk(child)
