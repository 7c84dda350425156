// Wire types mirroring the service's request and response bodies.
export {};
